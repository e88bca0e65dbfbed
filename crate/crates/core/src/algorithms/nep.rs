//! Frank-Wolfe with the nearest-extreme-point oracle.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

/// Nearest-extreme-point Frank-Wolfe: `v_t = nep(grad f(x_t), L gamma_t/2,
/// x_t)` with the fixed schedule `gamma_t = 2/(t+2)` (the oracle needs the
/// step size before the call, ruling out line search).
///
/// Stops on the primal gap when the objective declares its optimum,
/// otherwise runs out the budget. The trace's gap column is NaN: the NEP
/// answer does not certify a Frank-Wolfe gap and computing one would spend
/// extra LMO calls.
pub fn run_nepfw(
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
) -> Result<RunResult> {
    let l = objective
        .smoothness()
        .ok_or_else(|| Error::ContractViolation("nep runner requires L".into()))?;
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

    for t in 0..config.max_iters {
        rec.observe(&x);
        let fx = objective.value(&x);
        if let Some(f_star) = objective.optimum_value() {
            if fx - f_star <= config.tol {
                rec.record(t, fx, f64::NAN, 0.0, counters, 0, true);
                stop = StopReason::Converged;
                iterations = t;
                break;
            }
        }
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;
        let gamma = 2.0 / (t + 2) as f64;
        let v = region.nep(&grad, l * gamma / 2.0, &x)?;
        counters.lmo_calls += 1;
        rec.record(t, fx, f64::NAN, gamma, counters, 0, t + 1 == config.max_iters);
        stats.fw_steps += 1;
        x = x.convex_step(gamma, &v);
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(&x);
    }
    let f_final = objective.value(&x);
    Ok(rec.finish(x, f_final, stop, iterations, counters, stats, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::run_fw;
    use crate::objectives::DiagQuadratic;
    use crate::point::Point;
    use crate::run::StartPoint;
    use crate::step::StepRule;

    #[test]
    fn optimal_vertex_start_stops_at_zero() {
        let f = DiagQuadratic::new(vec![1.0, 1.0], vec![1.0, 0.0]).with_optimum(0.0);
        let region = FeasibleRegion::Simplex { n: 2 };
        let config = RunConfig {
            tol: 1e-12,
            start: StartPoint::Given(Point::unit(2, 0)),
            ..Default::default()
        };
        let res = run_nepfw(&f, &region, &config).unwrap();
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn unsupported_region_is_a_capability_error() {
        let f = DiagQuadratic::norm_sq(2);
        let region = FeasibleRegion::L1Ball { n: 2, tau: 1.0 };
        let config = RunConfig {
            start: StartPoint::Given(Point::zeros(2)),
            max_iters: 3,
            tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(run_nepfw(&f, &region, &config), Err(Error::Capability(_))));
    }

    #[test]
    fn beats_plain_fw_when_the_optimum_face_is_small() {
        // hypercube with the optimum on a 5-dimensional face
        let n = 32;
        let mut center = vec![0.0; n];
        for (i, c) in center.iter_mut().enumerate().take(5) {
            *c = 0.4 + 0.05 * i as f64;
        }
        center[6] = 1.0;
        let f = DiagQuadratic::new(vec![1.0; n], center.clone()).with_optimum(0.0);
        let region = FeasibleRegion::Hypercube01 { n };
        // start close to the optimal face, mirroring the hypercube setup
        let mut start = center.clone();
        for c in start.iter_mut().take(5) {
            *c = 0.0;
        }
        start[5] = 1.0;
        let config = RunConfig {
            max_iters: 200,
            tol: 0.0,
            step_rule: StepRule::OpenLoop { shift: 2 },
            start: StartPoint::Given(Point::new(start)),
            ..Default::default()
        };
        let nep = run_nepfw(&f, &region, &config).unwrap();
        let plain = run_fw(&f, &region, &config).unwrap();
        let h_nep = nep.f_value;
        let h_fw = plain.f_value;
        assert!(h_nep <= h_fw + 1e-12, "nep {h_nep} vs fw {h_fw}");
    }
}
