//! Away-step Frank-Wolfe: maintains an explicit convex decomposition and
//! moves weight off bad atoms when that promises more progress.

use crate::active_set::{ActiveSet, ActiveSetUpdate};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

use super::choose_step;

/// Away-step Frank-Wolfe. The per-iteration branch compares the Frank-Wolfe
/// gap `<grad, x - v_fw>` with the away gap `<grad, v_away - x>`; away steps
/// cap the step size at `w/(1-w)` so the away atom's weight stays
/// nonnegative, dropping the atom when the cap is hit. Stops when the
/// strong Frank-Wolfe gap (their sum) drops to `config.tol`.
pub fn run_afw(
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
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
    let mut active = ActiveSet::singleton(x0);
    let mut rule = config.step_rule.clone();
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let mut stats = StepStats::default();
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    for t in 0..config.max_iters {
        let x = active.iterate().clone();
        rec.observe(&x);
        let fx = objective.value(&x);
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;
        let v_fw = region.lmo(&grad)?;
        counters.lmo_calls += 1;
        let fw_gap = grad.dot(&x.sub(&v_fw));
        let (away_idx, away_val) = active.away_atom(&grad);
        let away_gap = away_val - grad.dot(&x);
        let strong_gap = fw_gap + away_gap;
        if strong_gap <= config.tol {
            rec.record(t, fx, fw_gap, 0.0, counters, active.len() as u64, true);
            stop = StopReason::Converged;
            iterations = t;
            break;
        }

        let gamma;
        if fw_gap >= away_gap {
            // Frank-Wolfe step
            let d = x.sub(&v_fw);
            gamma = choose_step(&mut rule, objective, &x, &d, fw_gap, 1.0, t, &grad, fx)?;
            stats.fw_steps += 1;
            active.update(ActiveSetUpdate::FwStep { vertex: v_fw, gamma })?;
        } else {
            // away step
            let v_a = active.atoms()[away_idx].clone();
            let w = active.weights()[away_idx];
            if w >= 1.0 {
                return Err(Error::NumericFailure(
                    "away step selected from a singleton active set".into(),
                ));
            }
            let gamma_max = w / (1.0 - w);
            let d = v_a.sub(&x);
            gamma = choose_step(&mut rule, objective, &x, &d, away_gap, gamma_max, t, &grad, fx)?;
            let dropped = gamma >= gamma_max * (1.0 - 1e-12);
            stats.away_steps += 1;
            if dropped {
                stats.drop_steps += 1;
            }
            active.update(ActiveSetUpdate::AwayStep { vertex: v_a, gamma })?;
        }
        debug_assert!(active.check_invariants().is_ok());
        rec.record(t, fx, fw_gap, gamma, counters, active.len() as u64, t + 1 == config.max_iters);
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(active.iterate());
    }
    let x = active.iterate().clone();
    let f_final = objective.value(&x);
    Ok(rec.finish(x, f_final, stop, iterations, counters, stats, Some(active)))
}
