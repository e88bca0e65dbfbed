//! Projection-free convex optimization: the Frank-Wolfe / conditional
//! gradient family.
//!
//! The crate provides
//! - exact linear minimization oracles for the standard feasible regions
//!   (simplex, l1/lp balls, boxes, hypercube, nuclear-norm ball, Birkhoff
//!   polytope, explicit hulls), plus nearest-extreme-point and lazy
//!   weak-separation oracles;
//! - the step-size policies (open loop, short step, exact line search,
//!   adaptive smoothness estimation);
//! - deterministic runners: vanilla, away-step, pairwise,
//!   decomposition-invariant pairwise, fully-corrective, lazified, blended,
//!   sliding, nearest-extreme-point, boosted, and smoothing variants;
//! - stochastic runners with batch-mean, momentum, difference-accumulating,
//!   variance-reduced and one-sample gradient estimators;
//! - application solvers: approximate Caratheodory decompositions, minimum
//!   enclosing balls via the dual coreset formulation, and D-optimal
//!   experimental design with rank-1 state updates.
//!
//! Every runner emits a [`trace::RunTrace`] (per-iteration values, gaps,
//! oracle-call counters) with a stable CSV serialization.

pub mod active_set;
pub mod algorithms;
pub mod apps;
pub mod error;
pub mod gap;
pub mod hungarian;
pub mod lazy;
pub mod objective;
pub mod objectives;
pub mod point;
pub mod region;
pub mod run;
pub mod step;
pub mod stochastic;
pub mod trace;

pub use active_set::{ActiveSet, ActiveSetUpdate};
pub use error::{Error, Result};
pub use gap::{finite_diff_check, fw_gap, strong_fw_gap, GapReport};
pub use objective::Objective;
pub use point::Point;
pub use region::{FeasibleRegion, LinearOracle};
pub use run::{RunConfig, RunResult, StartPoint, StopReason};
pub use step::StepRule;
pub use trace::{Counters, RunTrace, TraceRow};
