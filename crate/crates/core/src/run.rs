//! Run configuration and results shared by every runner.

use std::time::Instant;

use crate::active_set::ActiveSet;
use crate::error::Result;
use crate::objective::Objective;
use crate::point::Point;
use crate::region::LinearOracle;
use crate::step::StepRule;
use crate::trace::{Counters, RunTrace, TraceRow};

/// How a run chooses its start point.
#[derive(Debug, Clone, Default)]
pub enum StartPoint {
    /// `x0 = lmo(grad f(p))` for the region's canonical feasible point `p`:
    /// a vertex, so the standard burn-in bound applies.
    #[default]
    LmoFromFeasible,
    /// Explicit start point (callers ensure feasibility; active-set methods
    /// additionally require a vertex).
    Given(Point),
}

/// Shared runner configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub max_iters: u64,
    /// Stop when the Frank-Wolfe gap (or the strong gap, for active-set
    /// methods) drops to this value.
    pub tol: f64,
    pub step_rule: StepRule,
    /// Seed for any randomized component (stochastic oracles).
    pub seed: u64,
    /// Record every k-th iteration (1 = all). The stopping row is always
    /// recorded.
    pub record_every: u64,
    pub start: StartPoint,
    /// Keep the full iterate sequence in the result (tests, small runs).
    pub keep_iterates: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_iters: 10_000,
            tol: 1e-8,
            step_rule: StepRule::default(),
            seed: 0,
            record_every: 1,
            start: StartPoint::default(),
            keep_iterates: false,
        }
    }
}

impl RunConfig {
    pub fn start_point(
        &self,
        objective: &dyn Objective,
        region: &dyn LinearOracle,
    ) -> Result<Point> {
        match &self.start {
            StartPoint::Given(x) => Ok(x.clone()),
            StartPoint::LmoFromFeasible => {
                let p = region.feasible_point();
                region.lmo(&objective.gradient(&p))
            }
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Gap criterion met (certified by an exact oracle answer).
    Converged,
    /// Iteration budget exhausted.
    MaxIters,
}

/// Step-kind tallies for active-set methods.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepStats {
    pub fw_steps: u64,
    pub away_steps: u64,
    pub drop_steps: u64,
    pub pairwise_steps: u64,
    pub descent_steps: u64,
    pub cache_hits: u64,
    pub negative_answers: u64,
}

/// Result of a run: the trace, the final iterate, and auxiliary state.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub trace: RunTrace,
    pub x: Point,
    pub f_value: f64,
    pub stop: StopReason,
    pub iterations: u64,
    pub counters: Counters,
    pub stats: StepStats,
    /// Final active set, for methods that maintain one.
    pub active_set: Option<ActiveSet>,
    /// Recorded iterates when `keep_iterates` was set.
    pub iterates: Option<Vec<Point>>,
}

/// Internal helper threading trace recording through a runner loop.
pub(crate) struct Recorder {
    trace: RunTrace,
    record_every: u64,
    start: Instant,
    optimum: Option<f64>,
    iterates: Option<Vec<Point>>,
}

impl Recorder {
    pub fn new(objective: &dyn Objective, keep_iterates: bool, record_every: u64) -> Self {
        Recorder {
            trace: RunTrace::default(),
            record_every: record_every.max(1),
            start: Instant::now(),
            optimum: objective.optimum_value(),
            iterates: if keep_iterates { Some(Vec::new()) } else { None },
        }
    }

    pub fn observe(&mut self, x: &Point) {
        if let Some(list) = &mut self.iterates {
            list.push(x.clone());
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn record(
        &mut self,
        t: u64,
        f_value: f64,
        fw_gap: f64,
        step_size: f64,
        counters: Counters,
        active_set_size: u64,
        force: bool,
    ) {
        if !force && !t.is_multiple_of(self.record_every) {
            return;
        }
        let primal_gap = match self.optimum {
            Some(f_star) => f_value - f_star,
            None => fw_gap,
        };
        self.trace.push(TraceRow {
            t,
            f_value,
            fw_gap,
            primal_gap,
            step_size,
            lmo_calls: counters.lmo_calls,
            foo_calls: counters.foo_calls,
            sfo_calls: counters.sfo_calls,
            active_set_size,
            wall_time_ns: self.start.elapsed().as_nanos() as u64,
        });
    }

    #[allow(clippy::too_many_arguments)]
    pub fn finish(
        self,
        x: Point,
        f_value: f64,
        stop: StopReason,
        iterations: u64,
        counters: Counters,
        stats: StepStats,
        active_set: Option<ActiveSet>,
    ) -> RunResult {
        RunResult {
            trace: self.trace,
            x,
            f_value,
            stop,
            iterations,
            counters,
            stats,
            active_set,
            iterates: self.iterates,
        }
    }
}
