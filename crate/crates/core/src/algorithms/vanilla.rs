//! The vanilla Frank-Wolfe runner.

use crate::error::Result;
use crate::objective::Objective;
use crate::region::LinearOracle;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

use super::choose_step;

/// Vanilla Frank-Wolfe: `x_{t+1} = x_t + gamma_t (v_t - x_t)` with
/// `v_t = lmo(grad f(x_t))`. Stops when the Frank-Wolfe gap drops to
/// `config.tol` or the iteration budget runs out.
///
/// Generic over the oracle so tests can inject approximate LMOs.
pub fn run_fw<R: LinearOracle + ?Sized>(
    objective: &dyn Objective,
    region: &R,
    config: &RunConfig,
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
    let mut rule = config.step_rule.clone();
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let mut stats = StepStats::default();
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    for t in 0..config.max_iters {
        rec.observe(&x);
        let fx = objective.value(&x);
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;
        let v = region.lmo(&grad)?;
        counters.lmo_calls += 1;
        let d = x.sub(&v);
        let gap = grad.dot(&d);
        if gap <= config.tol {
            rec.record(t, fx, gap, 0.0, counters, 0, true);
            stop = StopReason::Converged;
            iterations = t;
            break;
        }
        let gamma = choose_step(&mut rule, objective, &x, &d, gap, 1.0, t, &grad, fx)?;
        rec.record(t, fx, gap, gamma, counters, 0, t + 1 == config.max_iters);
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
    use crate::objectives::DiagQuadratic;
    use crate::point::Point;
    use crate::region::FeasibleRegion;
    use crate::run::StartPoint;
    use crate::step::StepRule;

    fn interval() -> FeasibleRegion {
        FeasibleRegion::Box { lower: vec![-1.0], upper: vec![1.0] }
    }

    #[test]
    fn scalar_quadratic_open_loop_trajectory() {
        // x_{2t} = 1/(2t+1), x_{2t+1} = -1/(2t+1)
        let f = DiagQuadratic::norm_sq(1).with_optimum(0.0);
        let config = RunConfig {
            max_iters: 20,
            tol: 0.0,
            step_rule: StepRule::OpenLoop { shift: 2 },
            start: StartPoint::Given(Point::new(vec![1.0])),
            keep_iterates: true,
            ..Default::default()
        };
        let res = run_fw(&f, &interval(), &config).unwrap();
        let xs = res.iterates.unwrap();
        assert_eq!(xs[1].coords()[0], -1.0);
        for (t, x) in xs.iter().enumerate() {
            let k = t / 2;
            let expect = (1.0 / (2 * k + 1) as f64) * if t % 2 == 0 { 1.0 } else { -1.0 };
            assert!(
                (x.coords()[0] - expect).abs() <= 1e-14,
                "t={t}: {} vs {}",
                x.coords()[0],
                expect
            );
        }
    }

    #[test]
    fn scalar_quadratic_short_step_geometric() {
        // loose L = 4: x_t = (1 - 2/L)^t = 0.5^t, bit-exact
        struct LooseL(DiagQuadratic);
        impl crate::objective::Objective for LooseL {
            fn value(&self, x: &Point) -> f64 {
                self.0.value(x)
            }
            fn gradient(&self, x: &Point) -> Point {
                self.0.gradient(x)
            }
            fn smoothness(&self) -> Option<f64> {
                Some(4.0)
            }
        }
        let f = LooseL(DiagQuadratic::norm_sq(1));
        let config = RunConfig {
            max_iters: 50,
            tol: 0.0,
            step_rule: StepRule::Short,
            start: StartPoint::Given(Point::new(vec![1.0])),
            keep_iterates: true,
            ..Default::default()
        };
        let res = run_fw(&f, &interval(), &config).unwrap();
        for (t, x) in res.iterates.unwrap().iter().enumerate() {
            assert_eq!(x.coords()[0], 0.5f64.powi(t as i32), "t={t}");
        }
    }

    #[test]
    fn starts_at_optimum_stops_immediately() {
        let f = DiagQuadratic::norm_sq(1);
        let config = RunConfig {
            tol: 1e-12,
            start: StartPoint::Given(Point::new(vec![0.0])),
            ..Default::default()
        };
        let res = run_fw(&f, &interval(), &config).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn simplex_line_search_averages_vertices() {
        // x_t = (e_1 + ... + e_{t+1}) / (t+1), exact optimum at t = n-1
        let n = 8;
        let f = DiagQuadratic::norm_sq(n).with_optimum(1.0 / n as f64);
        let region = FeasibleRegion::Simplex { n };
        let config = RunConfig {
            max_iters: 50,
            tol: 1e-15,
            step_rule: StepRule::LineSearch,
            start: StartPoint::Given(Point::unit(n, 0)),
            keep_iterates: true,
            ..Default::default()
        };
        let res = run_fw(&f, &region, &config).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        assert_eq!(res.iterations, (n - 1) as u64);
        let xs = res.iterates.unwrap();
        for (t, x) in xs.iter().enumerate() {
            for (i, &xi) in x.coords().iter().enumerate() {
                let expect = if i <= t { 1.0 / (t + 1) as f64 } else { 0.0 };
                assert!((xi - expect).abs() <= 1e-12);
            }
        }
        // primal gap column matches 1/(t+1) - 1/n
        for row in &res.trace.rows {
            let expect = 1.0 / (row.t + 1) as f64 - 1.0 / n as f64;
            assert!((row.primal_gap - expect).abs() <= 1e-12);
        }
    }

    #[test]
    fn trace_counters_are_monotone() {
        let f = DiagQuadratic::norm_sq(3);
        let region = FeasibleRegion::Simplex { n: 3 };
        let res = run_fw(&f, &region, &RunConfig { max_iters: 25, ..Default::default() }).unwrap();
        assert!(res.trace.check_invariants());
    }
}
