//! Lazified conditional gradients: drive steps with the weak-separation
//! oracle instead of exact linear minimization.

use crate::active_set::{ActiveSet, ActiveSetUpdate};
use crate::error::{Error, Result};
use crate::lazy::{weak_separation, SeparationAnswer, WeakSeparationCache};
use crate::objective::Objective;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

use super::choose_step;

/// Which lazy runner to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LazyVariant {
    /// Parameter-free lazy conditional gradient (vanilla steps only).
    Fw,
    /// Lazy away-step Frank-Wolfe: the active set doubles as the cache and
    /// is searched for away and towards candidates before the oracle.
    Afw,
}

/// Lazified Frank-Wolfe. A positive oracle answer yields a step; a negative
/// answer updates the improvement goal `phi <- min{phi/2, g}` using the
/// exact gap of the certifying LMO call, and the run stops once that
/// certified gap reaches `config.tol`.
///
/// `phi0 = None` defaults to `g(x0)/2` via one initial LMO call.
pub fn run_lazy(
    variant: LazyVariant,
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
    k: f64,
    phi0: Option<f64>,
) -> Result<RunResult> {
    if k < 1.0 {
        return Err(Error::ContractViolation("lazy accuracy K must be >= 1".into()));
    }
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
    let mut active = ActiveSet::singleton(x0);
    let mut cache = WeakSeparationCache::default();
    let mut rule = config.step_rule.clone();
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let mut stats = StepStats::default();
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    let mut phi = match phi0 {
        Some(p) => p,
        None => {
            let grad = objective.gradient(active.iterate());
            counters.foo_calls += 1;
            let v = region.lmo(&grad)?;
            counters.lmo_calls += 1;
            let g0 = grad.dot(&active.iterate().sub(&v));
            if g0 <= config.tol {
                // already certified optimal to tolerance
                let fx = objective.value(active.iterate());
                rec.observe(active.iterate());
                rec.record(0, fx, g0, 0.0, counters, active.len() as u64, true);
                let x = active.iterate().clone();
                return Ok(rec.finish(
                    x.clone(),
                    objective.value(&x),
                    StopReason::Converged,
                    0,
                    counters,
                    stats,
                    Some(active),
                ));
            }
            g0 / 2.0
        }
    };

    for t in 0..config.max_iters {
        let x = active.iterate().clone();
        rec.observe(&x);
        let fx = objective.value(&x);
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;
        let threshold = phi / k;

        // Away-variant: search the active set first, as away or towards
        // candidate, before touching the oracle.
        let mut step_taken = false;
        let mut recorded_gamma = 0.0;
        if variant == LazyVariant::Afw && active.len() > 1 {
            let (away_idx, away_val) = active.away_atom(&grad);
            let away_gap = away_val - grad.dot(&x);
            let (tow_idx, tow_val) = active.towards_atom(&grad);
            let tow_gap = grad.dot(&x) - tow_val;
            if away_gap >= tow_gap && away_gap > threshold {
                let v_a = active.atoms()[away_idx].clone();
                let w = active.weights()[away_idx];
                let gamma_max = w / (1.0 - w);
                let d = v_a.sub(&x);
                let gamma =
                    choose_step(&mut rule, objective, &x, &d, away_gap, gamma_max, t, &grad, fx)?;
                stats.away_steps += 1;
                stats.cache_hits += 1;
                if gamma >= gamma_max * (1.0 - 1e-12) {
                    stats.drop_steps += 1;
                }
                active.update(ActiveSetUpdate::AwayStep { vertex: v_a, gamma })?;
                step_taken = true;
                recorded_gamma = gamma;
            } else if tow_gap > threshold {
                let v = active.atoms()[tow_idx].clone();
                let d = x.sub(&v);
                let gamma = choose_step(&mut rule, objective, &x, &d, tow_gap, 1.0, t, &grad, fx)?;
                stats.fw_steps += 1;
                stats.cache_hits += 1;
                active.update(ActiveSetUpdate::FwStep { vertex: v, gamma })?;
                step_taken = true;
                recorded_gamma = gamma;
            }
        }

        if !step_taken {
            let (answer, lmo_used) = weak_separation(region, &mut cache, &grad, &x, phi, k)?;
            counters.lmo_calls += lmo_used;
            if lmo_used == 0 {
                stats.cache_hits += 1;
            }
            match answer {
                SeparationAnswer::Positive(v) => {
                    let d = x.sub(&v);
                    let dir = grad.dot(&d);
                    let gamma = choose_step(&mut rule, objective, &x, &d, dir, 1.0, t, &grad, fx)?;
                    stats.fw_steps += 1;
                    active.update(ActiveSetUpdate::FwStep { vertex: v, gamma })?;
                    recorded_gamma = gamma;
                }
                SeparationAnswer::Negative(g) => {
                    stats.negative_answers += 1;
                    rec.record(t, fx, g, 0.0, counters, active.len() as u64, true);
                    if g <= config.tol {
                        stop = StopReason::Converged;
                        iterations = t;
                        break;
                    }
                    phi = (phi / 2.0).min(g);
                    iterations = t + 1;
                    continue;
                }
            }
        }
        rec.record(
            t,
            fx,
            f64::NAN, // the exact gap is only known on negative answers
            recorded_gamma,
            counters,
            active.len() as u64,
            t + 1 == config.max_iters,
        );
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(active.iterate());
    }
    let x = active.iterate().clone();
    let f_final = objective.value(&x);
    Ok(rec.finish(x, f_final, stop, iterations, counters, stats, Some(active)))
}
