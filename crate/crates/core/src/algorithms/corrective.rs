//! Fully-corrective Frank-Wolfe: after every LMO call, minimize the
//! objective over the convex hull of all vertices seen so far.

use crate::active_set::ActiveSet;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::step::line_search;
use crate::trace::Counters;

const MAX_INNER_STEPS: usize = 10_000;

/// Fully-corrective Frank-Wolfe. The correction subproblem (minimize `f`
/// over the hull of the seen vertices) runs an away-step method on the
/// barycentric coordinates with exact line search, to inner tolerance
/// `1e-2 * config.tol` on the inner strong gap.
pub fn run_fcfw(
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
    let mut atoms = vec![x0.clone()];
    let mut lambda = vec![1.0f64];
    let mut x = x0;
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let mut stats = StepStats::default();
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;
    let inner_tol = 1e-2 * config.tol;

    for t in 0..config.max_iters {
        rec.observe(&x);
        let fx = objective.value(&x);
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;
        let v = region.lmo(&grad)?;
        counters.lmo_calls += 1;
        let fw_gap = grad.dot(&x.sub(&v));
        let support = lambda.iter().filter(|&&w| w > 0.0).count() as u64;
        if fw_gap <= config.tol {
            rec.record(t, fx, fw_gap, 0.0, counters, support, true);
            stop = StopReason::Converged;
            iterations = t;
            break;
        }
        if !atoms.contains(&v) {
            atoms.push(v);
            lambda.push(0.0);
        }
        let inner_foo =
            correct_over_hull(objective, &atoms, &mut lambda, &mut x, inner_tol)?;
        counters.foo_calls += inner_foo;
        stats.fw_steps += 1;
        let support = lambda.iter().filter(|&&w| w > 0.0).count() as u64;
        rec.record(t, fx, fw_gap, 1.0, counters, support, t + 1 == config.max_iters);
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(&x);
    }
    let f_final = objective.value(&x);
    let positive: Vec<(Point, f64)> = atoms
        .iter()
        .cloned()
        .zip(lambda.iter().cloned())
        .filter(|(_, w)| *w > 0.0)
        .collect();
    let active = ActiveSet::from_parts(
        positive.iter().map(|(a, _)| a.clone()).collect(),
        {
            let sum: f64 = positive.iter().map(|(_, w)| w).sum();
            positive.iter().map(|(_, w)| w / sum).collect()
        },
    )?;
    Ok(rec.finish(x, f_final, stop, iterations, counters, stats, Some(active)))
}

/// Away-step method on the barycentric coordinates of `atoms`, with exact
/// line search, run until the inner strong gap over the hull drops to
/// `tol`. Updates `lambda` and `x` in place; returns gradient evaluations.
fn correct_over_hull(
    objective: &dyn Objective,
    atoms: &[Point],
    lambda: &mut [f64],
    x: &mut Point,
    tol: f64,
) -> Result<u64> {
    let mut grad_evals = 0u64;
    for _ in 0..MAX_INNER_STEPS {
        let grad = objective.gradient(x);
        grad_evals += 1;
        let scores: Vec<f64> = atoms.iter().map(|a| grad.dot(a)).collect();
        let mut fw_i = 0;
        let mut fw_val = f64::INFINITY;
        let mut away_i = 0;
        let mut away_val = f64::NEG_INFINITY;
        for (i, &s) in scores.iter().enumerate() {
            if s < fw_val {
                fw_val = s;
                fw_i = i;
            }
            if lambda[i] > 0.0 && s > away_val {
                away_val = s;
                away_i = i;
            }
        }
        if away_val - fw_val <= tol {
            return Ok(grad_evals);
        }
        let gx = grad.dot(x);
        let fw_gap = gx - fw_val;
        let away_gap = away_val - gx;
        if fw_gap >= away_gap {
            let d = x.sub(&atoms[fw_i]);
            let gamma = line_search(objective, x, &d, 1.0, Some(fw_gap));
            for w in lambda.iter_mut() {
                *w *= 1.0 - gamma;
            }
            lambda[fw_i] += gamma;
            *x = x.convex_step(gamma, &atoms[fw_i]);
        } else {
            let w = lambda[away_i];
            if w >= 1.0 {
                return Ok(grad_evals); // singleton support, nothing to move away from
            }
            let gamma_max = w / (1.0 - w);
            let d = atoms[away_i].sub(x);
            let gamma = line_search(objective, x, &d, gamma_max, Some(away_gap));
            for w in lambda.iter_mut() {
                *w *= 1.0 + gamma;
            }
            lambda[away_i] -= gamma;
            if lambda[away_i] < crate::active_set::WEIGHT_EPS {
                lambda[away_i] = 0.0;
            }
            let mut y = x.clone();
            y.add_scaled(-gamma, &d);
            *x = y;
        }
        // keep the iterate consistent with the decomposition
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            for w in lambda.iter_mut() {
                *w /= sum;
            }
        }
    }
    Err(Error::NumericFailure(
        "fully-corrective inner solver stalled".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::DiagQuadratic;
    use crate::run::StartPoint;

    fn triangle() -> FeasibleRegion {
        FeasibleRegion::Polytope {
            vertices: vec![
                Point::new(vec![-1.0, 0.0]),
                Point::new(vec![1.0, 0.0]),
                Point::new(vec![0.0, 1.0]),
            ],
        }
    }

    #[test]
    fn triangle_optimum_after_two_lmo_calls() {
        let f = DiagQuadratic::new(vec![2.0, 1.0], vec![0.0, 0.0]);
        let config = RunConfig {
            max_iters: 10,
            tol: 1e-12,
            start: StartPoint::Given(Point::new(vec![0.0, 1.0])),
            keep_iterates: true,
            ..Default::default()
        };
        let res = run_fcfw(&f, &triangle(), &config).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        // optimum (0,0) reached after seeing all vertices: 2 productive iterations
        assert_eq!(res.iterations, 2);
        let xs = res.iterates.unwrap();
        assert!(xs[2].norm() <= 1e-7, "x2 = {:?}", xs[2].coords());
    }

    #[test]
    fn optimal_start_needs_no_iterations() {
        let f = DiagQuadratic::new(vec![1.0, 1.0], vec![1.0, 0.0]);
        let region = FeasibleRegion::Simplex { n: 2 };
        let config = RunConfig {
            tol: 1e-12,
            start: StartPoint::Given(Point::unit(2, 0)),
            ..Default::default()
        };
        let res = run_fcfw(&f, &region, &config).unwrap();
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn simplex_barycenter_after_n_minus_one_corrections() {
        // f = ||x||^2 over the 4-vertex simplex: optimum is the barycenter,
        // exact after 3 LMO calls (all vertices seen)
        let f = DiagQuadratic::norm_sq(4);
        let region = FeasibleRegion::Simplex { n: 4 };
        let config = RunConfig {
            max_iters: 10,
            tol: 1e-10,
            start: StartPoint::Given(Point::unit(4, 0)),
            ..Default::default()
        };
        let res = run_fcfw(&f, &region, &config).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        assert_eq!(res.iterations, 3);
        for &xi in res.x.coords() {
            assert!((xi - 0.25).abs() <= 1e-6);
        }
    }
}
