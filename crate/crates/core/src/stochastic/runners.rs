//! Stochastic Frank-Wolfe runners and stochastic sliding.

use crate::algorithms::sliding::{cg_projection, CgsSchedule};
use crate::error::Result;
use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

use super::estimator::{estimate_gradient, EstimatorState};
use super::oracle::StochasticOracle;
use super::stream_rng;

/// Function-agnostic step schedules used by the stochastic runners.
#[derive(Debug, Clone, Copy)]
pub enum GammaSchedule {
    /// `2 / (t + shift)`.
    TwoOver { shift: u64 },
    /// `1 / (t + shift)`.
    OneOver { shift: u64 },
}

impl GammaSchedule {
    pub fn gamma(&self, t: u64) -> f64 {
        match self {
            GammaSchedule::TwoOver { shift } => 2.0 / (t + shift) as f64,
            GammaSchedule::OneOver { shift } => 1.0 / (t + shift) as f64,
        }
    }
}

/// Stochastic conditional gradient template: Frank-Wolfe updates driven by
/// an estimated gradient. The recorded gap column is the *estimate-based*
/// gap `<est, x - v>` (it can be negative under noise); the stop test uses
/// it too, which an exact (zero-noise) oracle turns into the certified
/// criterion of the deterministic runner.
///
/// `objective` is used for trace values and optional primal gaps; the
/// gradient information comes exclusively from `oracle`.
pub fn run_stochastic_fw(
    estimator: &mut EstimatorState,
    objective: &dyn Objective,
    oracle: &dyn StochasticOracle,
    region: &FeasibleRegion,
    config: &RunConfig,
    gamma: GammaSchedule,
) -> Result<RunResult> {
    let mut counters = Counters::default();
    let mut x = match &config.start {
        crate::run::StartPoint::Given(p) => p.clone(),
        crate::run::StartPoint::LmoFromFeasible => {
            let p = region.feasible_point();
            counters.foo_calls += 1;
            counters.lmo_calls += 1;
            region.lmo(&objective.gradient(&p))?
        }
    };
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let mut stats = StepStats::default();
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;
    let mut x_prev = x.clone();

    for t in 0..config.max_iters {
        rec.observe(&x);
        let fx = objective.value(&x);
        let mut rng = stream_rng(config.seed, t);
        let (est, sfo, exact_grads) =
            estimate_gradient(estimator, oracle, &x, &x_prev, t, &mut rng)?;
        counters.sfo_calls += sfo;
        counters.foo_calls += exact_grads;
        let v = region.lmo(&est)?;
        counters.lmo_calls += 1;
        let est_gap = est.dot(&x.sub(&v));
        if est_gap <= config.tol {
            rec.record(t, fx, est_gap, 0.0, counters, 0, true);
            stop = StopReason::Converged;
            iterations = t;
            break;
        }
        let g = gamma.gamma(t).min(1.0);
        rec.record(t, fx, est_gap, g, counters, 0, t + 1 == config.max_iters);
        stats.fw_steps += 1;
        x_prev = x.clone();
        x = x.convex_step(g, &v);
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(&x);
    }
    let f_final = objective.value(&x);
    Ok(rec.finish(x, f_final, stop, iterations, counters, stats, None))
}

/// Batch schedule for stochastic sliding:
/// `b_t = ceil(sigma^2 (t+3)^3 / (L D)^2)`, at least one sample.
#[derive(Debug, Clone, Copy)]
pub struct ScgsBatch {
    pub sigma_sq: f64,
    pub l: f64,
    pub diameter: f64,
}

impl ScgsBatch {
    pub fn batch(&self, t: u64) -> u64 {
        let raw = self.sigma_sq * ((t + 3) as f64).powi(3) / (self.l * self.diameter).powi(2);
        (raw.ceil() as u64).max(1)
    }
}

/// Stochastic conditional gradient sliding: the sliding three-sequence
/// update with batch-mean gradients at the lookahead point. With the
/// published schedule use `eta_t = 4L/(t+3)`; passing the deterministic
/// sliding schedule plus a zero-noise oracle reproduces `run_cgs`
/// bit-for-bit.
pub fn run_scgs(
    objective: &dyn Objective,
    oracle: &dyn StochasticOracle,
    region: &FeasibleRegion,
    config: &RunConfig,
    schedule: &CgsSchedule,
    batch: ScgsBatch,
) -> Result<RunResult> {
    let mut counters = Counters::default();
    let x0 = match &config.start {
        crate::run::StartPoint::Given(p) => p.clone(),
        crate::run::StartPoint::LmoFromFeasible => {
            let p = region.feasible_point();
            counters.foo_calls += 1;
            counters.lmo_calls += 1;
            region.lmo(&objective.gradient(&p))?
        }
    };
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let stats = StepStats::default();
    let mut x = x0.clone();
    let mut y = x0;
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    for t in 0..config.max_iters {
        rec.observe(&y);
        let fy = objective.value(&y);
        if let Some(f_star) = objective.optimum_value() {
            if fy - f_star <= config.tol {
                rec.record(t, fy, f64::NAN, 0.0, counters, 0, true);
                stop = StopReason::Converged;
                iterations = t;
                break;
            }
        }
        let gamma = schedule.gamma(t);
        let w = y.convex_step(gamma, &x);
        let b = batch.batch(t);
        let mut rng = stream_rng(config.seed, t);
        let est = batch_mean_at(oracle, &w, b, &mut rng);
        counters.sfo_calls += b;
        let (x_next, inner_lmo) =
            cg_projection(&est, &x, schedule.eta(t), schedule.beta(t), region)?;
        counters.lmo_calls += inner_lmo;
        x = x_next;
        y = y.convex_step(gamma, &x);
        rec.record(t, fy, f64::NAN, gamma, counters, 0, t + 1 == config.max_iters);
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(&y);
    }
    let f_final = objective.value(&y);
    Ok(rec.finish(y, f_final, stop, iterations, counters, stats, None))
}

fn batch_mean_at(
    oracle: &dyn StochasticOracle,
    x: &Point,
    b: u64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Point {
    let mut mean = oracle.sample(x, rng);
    let mut k = 1.0;
    for _ in 1..b {
        let s = oracle.sample(x, rng);
        k += 1.0;
        for (m, v) in mean.coords_mut().iter_mut().zip(s.coords()) {
            *m += (*v - *m) / k;
        }
    }
    mean
}
