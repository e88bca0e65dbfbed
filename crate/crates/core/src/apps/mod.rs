//! End-to-end application solvers built on the library.

pub mod caratheodory;
pub mod dopt;
pub mod meb;

pub use caratheodory::{approx_caratheodory, approx_caratheodory_with, CaratheodoryResult, CaratheodoryStep};
pub use dopt::{dopt_design, dopt_rank1_update, DesignState, DoptResult, DoptVariant, LogDetObjective};
pub use meb::{meb_coreset, MebResult};
