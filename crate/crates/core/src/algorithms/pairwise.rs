//! Pairwise Frank-Wolfe and its decomposition-invariant variant.

use crate::active_set::{ActiveSet, ActiveSetUpdate};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

use super::choose_step;

/// Pairwise Frank-Wolfe: moves weight directly from the away atom to the
/// Frank-Wolfe vertex, `x_{t+1} = x_t + gamma (v_fw - v_away)` with
/// `gamma <= w_away`. Stops on the strong Frank-Wolfe gap.
pub fn run_pfw(
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
        let strong_gap = away_val - grad.dot(&v_fw);
        if strong_gap <= config.tol {
            rec.record(t, fx, fw_gap, 0.0, counters, active.len() as u64, true);
            stop = StopReason::Converged;
            iterations = t;
            break;
        }
        let v_a = active.atoms()[away_idx].clone();
        let gamma_max = active.weights()[away_idx];
        let d = v_a.sub(&v_fw); // x_{t+1} = x - gamma d
        let pair_gap = grad.dot(&d);
        let gamma = choose_step(&mut rule, objective, &x, &d, pair_gap, gamma_max, t, &grad, fx)?;
        stats.pairwise_steps += 1;
        if gamma >= gamma_max * (1.0 - 1e-12) {
            stats.drop_steps += 1;
        }
        active.update(ActiveSetUpdate::Pairwise { from: v_a, to: v_fw, gamma })?;
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

/// Step-size mode for the decomposition-invariant pairwise runner.
#[derive(Debug, Clone)]
pub enum DipfwStepMode {
    /// Exact line search over the feasible segment (the default).
    LineSearch,
    /// Power-of-two schedule `gamma_t = max{2^-k <= sqrt(mu/(16 L D^2 s))
    /// (1 - mu/(16 L D^2 s))^{(t-1)/2}}`, requiring a sparsity estimate `s`
    /// for the optimum.
    PowerOfTwo { sparsity: f64 },
}

/// Decomposition-invariant pairwise Frank-Wolfe for 0/1 polytopes of
/// simplex-like form. The away vertex comes from the minimal face containing
/// the iterate (zero coordinates priced out), so no active set is stored.
pub fn run_dipfw(
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
    mode: DipfwStepMode,
) -> Result<RunResult> {
    if !region.is_zero_one() {
        return Err(Error::Capability(
            "decomposition-invariant pairwise requires a 0/1 polytope".into(),
        ));
    }
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
    let mut last_pow2: f64 = 1.0;

    for t in 0..config.max_iters {
        rec.observe(&x);
        let fx = objective.value(&x);
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;
        let v_fw = region.lmo(&grad)?;
        counters.lmo_calls += 1;
        let fw_gap = grad.dot(&x.sub(&v_fw));
        let v_a = region.face_away_vertex(&grad, &x)?;
        counters.lmo_calls += 1; // face-restricted oracle call
        let strong_gap = grad.dot(&v_a.sub(&v_fw));
        if strong_gap <= config.tol {
            rec.record(t, fx, fw_gap, 0.0, counters, 0, true);
            stop = StopReason::Converged;
            iterations = t;
            break;
        }
        let d = v_a.sub(&v_fw); // x_{t+1} = x - gamma d
        // largest step keeping the iterate in the polytope: coordinates can
        // only leave [0, 1] where d is nonzero
        let mut gamma_cap = f64::INFINITY;
        for ((&xi, &di), &_vi) in x.coords().iter().zip(d.coords()).zip(v_fw.coords()) {
            if di > 0.0 {
                gamma_cap = gamma_cap.min(xi / di); // xi - gamma di >= 0
            } else if di < 0.0 {
                gamma_cap = gamma_cap.min((1.0 - xi) / -di); // xi - gamma di <= 1
            }
        }
        if !gamma_cap.is_finite() || gamma_cap <= 0.0 {
            rec.record(t, fx, fw_gap, 0.0, counters, 0, true);
            stop = StopReason::Converged; // no feasible pairwise movement
            iterations = t;
            break;
        }
        let gamma = match &mode {
            DipfwStepMode::LineSearch => {
                choose_step(&mut rule, objective, &x, &d, strong_gap, gamma_cap, t, &grad, fx)?
            }
            DipfwStepMode::PowerOfTwo { sparsity } => {
                let l = objective.smoothness().ok_or_else(|| {
                    Error::ContractViolation("power-of-two schedule requires L".into())
                })?;
                let mu = objective.strong_convexity().ok_or_else(|| {
                    Error::ContractViolation("power-of-two schedule requires mu".into())
                })?;
                let dsq = region.diameter() * region.diameter();
                let rate = mu / (16.0 * l * dsq * sparsity);
                let target = rate.sqrt() * (1.0 - rate).powf((t.saturating_sub(1)) as f64 / 2.0);
                let mut g = last_pow2;
                while g > target {
                    g *= 0.5;
                }
                last_pow2 = g;
                g.min(gamma_cap)
            }
        };
        stats.pairwise_steps += 1;
        x.add_scaled(-gamma, &d);
        rec.record(t, fx, fw_gap, gamma, counters, 0, t + 1 == config.max_iters);
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
    use crate::run::StartPoint;
    use crate::step::StepRule;

    #[test]
    fn pfw_value_decreases_on_the_triangle() {
        let f = DiagQuadratic::new(vec![2.0, 1.0], vec![0.0, 0.0]);
        let region = FeasibleRegion::Polytope {
            vertices: vec![
                Point::new(vec![-1.0, 0.0]),
                Point::new(vec![1.0, 0.0]),
                Point::new(vec![0.0, 1.0]),
            ],
        };
        let one = RunConfig {
            max_iters: 1,
            tol: 1e-14,
            step_rule: StepRule::LineSearch,
            start: StartPoint::Given(Point::new(vec![0.0, 1.0])),
            ..Default::default()
        };
        let first = run_pfw(&f, &region, &one).unwrap();
        assert!(first.active_set.as_ref().unwrap().len() <= 2);
        assert!((first.x.coords()[0] + 1.0 / 3.0).abs() < 1e-12);
        let config = RunConfig { max_iters: 6, ..one };
        let res = run_pfw(&f, &region, &config).unwrap();
        let vals: Vec<f64> = res.trace.rows.iter().map(|r| r.f_value).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn pfw_optimal_vertex_stops_immediately() {
        let f = DiagQuadratic::new(vec![1.0, 1.0], vec![1.0, 0.0]);
        let region = FeasibleRegion::Simplex { n: 2 };
        let config = RunConfig {
            tol: 1e-12,
            start: StartPoint::Given(Point::unit(2, 0)),
            ..Default::default()
        };
        let res = run_pfw(&f, &region, &config).unwrap();
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn pfw_reconstructs_iterate_over_birkhoff() {
        let n = 4;
        let f = DiagQuadratic::new(
            (0..n * n).map(|i| 0.5 + (i % 5) as f64 * 0.3).collect(),
            (0..n * n).map(|i| ((i * 7) % 11) as f64 / 11.0 - 0.3).collect(),
        );
        let region = FeasibleRegion::Birkhoff { n };
        let config = RunConfig {
            max_iters: 300,
            tol: 1e-9,
            step_rule: StepRule::LineSearch,
            ..Default::default()
        };
        let res = run_pfw(&f, &region, &config).unwrap();
        let active = res.active_set.unwrap();
        active.check_invariants().unwrap();
        assert!(active.iterate().max_abs_diff(&res.x) <= 1e-10);
    }

    #[test]
    fn dipfw_stays_feasible_on_simplex() {
        let f = DiagQuadratic::new(vec![1.0; 6], vec![0.3, 0.1, 0.25, 0.0, 0.2, 0.15]);
        let region = FeasibleRegion::Simplex { n: 6 };
        let config = RunConfig {
            max_iters: 200,
            tol: 1e-10,
            step_rule: StepRule::LineSearch,
            start: StartPoint::Given(Point::unit(6, 0)),
            keep_iterates: true,
            ..Default::default()
        };
        let res = run_dipfw(&f, &region, &config, DipfwStepMode::LineSearch).unwrap();
        for x in res.iterates.unwrap() {
            assert!(x.coords().iter().all(|&v| v >= -1e-15));
            assert!((x.coords().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn dipfw_optimal_vertex_stops_at_zero() {
        let f = DiagQuadratic::new(vec![1.0, 1.0], vec![1.0, 0.0]);
        let region = FeasibleRegion::Simplex { n: 2 };
        let config = RunConfig {
            tol: 1e-12,
            start: StartPoint::Given(Point::unit(2, 0)),
            ..Default::default()
        };
        let res = run_dipfw(&f, &region, &config, DipfwStepMode::LineSearch).unwrap();
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn dipfw_rejects_non_zero_one_regions() {
        let f = DiagQuadratic::norm_sq(2);
        let region = FeasibleRegion::L1Ball { n: 2, tau: 1.0 };
        let err = run_dipfw(&f, &region, &RunConfig::default(), DipfwStepMode::LineSearch);
        assert!(matches!(err, Err(Error::Capability(_))));
    }

    #[test]
    fn dipfw_matches_pfw_on_birkhoff_quadratic() {
        let n = 3;
        let f = DiagQuadratic::new(
            (0..n * n).map(|i| 0.4 + (i % 4) as f64 * 0.2).collect(),
            (0..n * n).map(|i| ((i * 5) % 7) as f64 / 7.0).collect(),
        );
        let region = FeasibleRegion::Birkhoff { n };
        let config = RunConfig {
            max_iters: 2000,
            tol: 1e-8,
            step_rule: StepRule::LineSearch,
            ..Default::default()
        };
        let a = run_pfw(&f, &region, &config).unwrap();
        let b = run_dipfw(&f, &region, &config, DipfwStepMode::LineSearch).unwrap();
        assert!((a.f_value - b.f_value).abs() <= 1e-6);
        // decomposition-invariant runner stores no active set
        assert!(b.active_set.is_none());
        assert!(b.trace.rows.iter().all(|r| r.active_set_size == 0));
    }
}

#[cfg(test)]
mod power_of_two_tests {
    use super::*;
    use crate::objectives::DiagQuadratic;
    use crate::run::{RunConfig, StartPoint};
    use crate::point::Point;
    use crate::step::StepRule;

    #[test]
    fn power_of_two_schedule_keeps_iterates_on_the_grid() {
        // mu-strongly convex quadratic over the simplex; the schedule needs
        // L, mu and a sparsity estimate and keeps coordinates on a 2^-k grid
        let n = 4;
        let f = DiagQuadratic::new(vec![1.0; n], vec![0.4, 0.3, 0.2, 0.1]);
        let region = FeasibleRegion::Simplex { n };
        let config = RunConfig {
            max_iters: 400,
            tol: 1e-6,
            step_rule: StepRule::LineSearch, // unused by the schedule
            start: StartPoint::Given(Point::unit(n, 0)),
            keep_iterates: true,
            ..Default::default()
        };
        let res =
            run_dipfw(&f, &region, &config, DipfwStepMode::PowerOfTwo { sparsity: 4.0 }).unwrap();
        for x in res.iterates.unwrap() {
            assert!(x.coords().iter().all(|&v| v >= 0.0));
            assert!((x.coords().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        }
        // the objective still decreases overall
        let first = res.trace.rows.first().unwrap().f_value;
        let last = res.trace.rows.last().unwrap().f_value;
        assert!(last < first);
    }
}
