//! Blended conditional gradient: cheap simplex-descent steps over the
//! active set, blended with lazy Frank-Wolfe steps.

use crate::active_set::{ActiveSet, ActiveSetUpdate, WEIGHT_EPS};
use crate::error::{Error, Result};
use crate::lazy::{weak_separation, SeparationAnswer, WeakSeparationCache};
use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::step::line_search;
use crate::trace::Counters;

/// What a simplex-descent call did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplexDescentOutcome {
    /// Hit the simplex boundary without increasing `f`; at least one atom
    /// was removed.
    Drop,
    /// Interior line-search step; progress is at least
    /// `max_{i,j} <grad, v_i - v_j>^2 / (4L)` for simplex-orthonormal atoms.
    Descent,
    /// Projected gradient vanished on the active set; nothing to do.
    Stationary,
}

/// One simplex-descent step over the convex hull of the active set.
///
/// Computes `g_i = <grad f(x), v_i>`, centers it (`d = g - mean(g) 1`,
/// the gradient within the simplex of coefficients), and moves
/// `lambda <- lambda - gamma d` with the largest feasible `gamma`. If the
/// boundary point does not increase `f` it is accepted and the zeroed atoms
/// are dropped; otherwise an exact line search on the segment yields the
/// descent step. A zero projected gradient returns the set unchanged
/// (stationary) so that callers fall back to their oracle branch.
pub fn simplex_descent(
    objective: &dyn Objective,
    active: &ActiveSet,
    _l: f64,
) -> Result<(ActiveSet, SimplexDescentOutcome)> {
    let grad = objective.gradient(active.iterate());
    simplex_descent_given(objective, &grad, active)
}

pub(crate) fn simplex_descent_given(
    objective: &dyn Objective,
    grad: &Point,
    active: &ActiveSet,
) -> Result<(ActiveSet, SimplexDescentOutcome)> {
    let k = active.len();
    if k <= 1 {
        return Ok((active.clone(), SimplexDescentOutcome::Stationary));
    }
    let scores: Vec<f64> = active.atoms().iter().map(|a| grad.dot(a)).collect();
    let mean = scores.iter().sum::<f64>() / k as f64;
    let d: Vec<f64> = scores.iter().map(|s| s - mean).collect();
    let d_norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if d_norm <= 1e-12 {
        return Ok((active.clone(), SimplexDescentOutcome::Stationary));
    }
    // largest gamma with lambda - gamma d >= 0
    let mut gamma_cap = f64::INFINITY;
    for (&wi, &di) in active.weights().iter().zip(&d) {
        if di > 0.0 {
            gamma_cap = gamma_cap.min(wi / di);
        }
    }
    if !gamma_cap.is_finite() || gamma_cap <= 0.0 {
        return Ok((active.clone(), SimplexDescentOutcome::Stationary));
    }
    // direction in ambient space: p = sum_i d_i v_i
    let mut p = Point::zeros(active.iterate().dim()).with_shape(active.iterate().shape());
    for (a, &di) in active.atoms().iter().zip(&d) {
        p.add_scaled(di, a);
    }
    let x = active.iterate();
    let fx = objective.value(x);
    let mut y = x.clone();
    y.add_scaled(-gamma_cap, &p);
    if objective.value(&y) <= fx {
        // drop step: accept the boundary point, shrink the set
        let new_weights: Vec<f64> = active
            .weights()
            .iter()
            .zip(&d)
            .map(|(&wi, &di)| (wi - gamma_cap * di).max(0.0))
            .collect();
        let mut shrunk = active.clone();
        shrunk.set_weights(new_weights)?;
        if shrunk.len() >= k {
            // numerically nothing was zeroed; force out the cap-binding atom
            let bind = active
                .weights()
                .iter()
                .zip(&d)
                .enumerate()
                .filter(|(_, (_, &di))| di > 0.0)
                .min_by(|(_, (&wa, &da)), (_, (&wb, &db))| {
                    (wa / da).partial_cmp(&(wb / db)).unwrap()
                })
                .map(|(i, _)| i);
            if let Some(i) = bind {
                let atom = active.atoms()[i].clone();
                shrunk.update(ActiveSetUpdate::Drop { vertex: atom })?;
            }
        }
        return Ok((shrunk, SimplexDescentOutcome::Drop));
    }
    // descent step: exact line search on [x, y]. The directional slope
    // <grad, p> equals ||d||^2 exactly (the mean term cancels against
    // sum d_i = 0); evaluating it in that form avoids the cancellation
    // that otherwise zeroes the step near optimality.
    let slope = d_norm * d_norm;
    let gamma = line_search(objective, x, &p, gamma_cap, Some(slope));
    let new_weights: Vec<f64> = active
        .weights()
        .iter()
        .zip(&d)
        .map(|(&wi, &di)| (wi - gamma * di).max(0.0))
        .collect();
    let mut stepped = active.clone();
    stepped.set_weights(new_weights)?;
    Ok((stepped, SimplexDescentOutcome::Descent))
}

/// Blended conditional gradient. Each iteration either takes a
/// simplex-descent step over the active set (when the active-set gap
/// estimate `<grad, v_away - v_towards>` reaches the goal `phi`) or falls
/// back to weak separation: positive answers take a line-search Frank-Wolfe
/// step and grow the set, negative answers tighten
/// `phi <- min{phi/2, g}` and stop the run once the certified gap reaches
/// `config.tol`. Zero-weight atoms are pruned on every update.
pub fn run_bcg(
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
    k: f64,
) -> Result<RunResult> {
    if k < 1.0 {
        return Err(Error::ContractViolation("accuracy K must be >= 1".into()));
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
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let mut stats = StepStats::default();
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    // phi_0 = g(x0) / 2 via one LMO call
    let grad0 = objective.gradient(active.iterate());
    counters.foo_calls += 1;
    let v0 = region.lmo(&grad0)?;
    counters.lmo_calls += 1;
    let g0 = grad0.dot(&active.iterate().sub(&v0));
    let mut phi = g0 / 2.0;
    if g0 <= config.tol {
        let fx = objective.value(active.iterate());
        rec.observe(active.iterate());
        rec.record(0, fx, g0, 0.0, counters, 1, true);
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

    for t in 0..config.max_iters {
        let x = active.iterate().clone();
        rec.observe(&x);
        let fx = objective.value(&x);
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;

        let (_, away_val) = active.away_atom(&grad);
        let (_, tow_val) = active.towards_atom(&grad);
        let active_gap = away_val - tow_val;

        let mut did_descent = false;
        if active_gap >= phi {
            let (next, outcome) = simplex_descent_given(objective, &grad, &active)?;
            match outcome {
                SimplexDescentOutcome::Drop => {
                    stats.drop_steps += 1;
                    active = next;
                    did_descent = true;
                }
                SimplexDescentOutcome::Descent => {
                    stats.descent_steps += 1;
                    active = next;
                    did_descent = true;
                }
                SimplexDescentOutcome::Stationary => {} // fall through to the oracle
            }
        }
        if did_descent {
            rec.record(
                t,
                fx,
                f64::NAN,
                f64::NAN,
                counters,
                active.len() as u64,
                t + 1 == config.max_iters,
            );
            iterations = t + 1;
            continue;
        }

        let (answer, lmo_used) = weak_separation(region, &mut cache, &grad, &x, phi, k)?;
        counters.lmo_calls += lmo_used;
        if lmo_used == 0 {
            stats.cache_hits += 1;
        }
        match answer {
            SeparationAnswer::Positive(v) => {
                let d = x.sub(&v);
                let dir = grad.dot(&d);
                let gamma = line_search(objective, &x, &d, 1.0, Some(dir));
                stats.fw_steps += 1;
                active.update(ActiveSetUpdate::FwStep { vertex: v, gamma })?;
                rec.record(
                    t,
                    fx,
                    f64::NAN,
                    gamma,
                    counters,
                    active.len() as u64,
                    t + 1 == config.max_iters,
                );
            }
            SeparationAnswer::Negative(g) => {
                stats.negative_answers += 1;
                rec.record(t, fx, g, 0.0, counters, active.len() as u64, true);
                // stop on the strong-gap certificate: the exact gap from the
                // negative oracle answer plus the active-set away gap
                if g + (away_val - grad.dot(&x)) <= config.tol {
                    stop = StopReason::Converged;
                    iterations = t;
                    break;
                }
                phi = (phi / 2.0).min(g);
            }
        }
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(active.iterate());
    }
    let x = active.iterate().clone();
    let f_final = objective.value(&x);
    debug_assert!(active.weights().iter().all(|&w| w >= WEIGHT_EPS));
    Ok(rec.finish(x, f_final, stop, iterations, counters, stats, Some(active)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::DiagQuadratic;
    use crate::run::StartPoint;

    #[test]
    fn stationary_on_balanced_pair() {
        // S = {e1, e2}, x = (0.5, 0.5, 0), f = ||x||^2: centered scores vanish
        let f = DiagQuadratic::norm_sq(3);
        let active = ActiveSet::from_parts(
            vec![Point::unit(3, 0), Point::unit(3, 1)],
            vec![0.5, 0.5],
        )
        .unwrap();
        let (out, outcome) = simplex_descent(&f, &active, 2.0).unwrap();
        assert_eq!(outcome, SimplexDescentOutcome::Stationary);
        assert_eq!(out.iterate(), active.iterate());
    }

    #[test]
    fn descent_step_meets_the_progress_contract() {
        // S = {e1, e2}, x = (0.9, 0.1, 0): decrease 0.82 -> 0.5 = 0.32
        // matches (g1 - g2)^2 / (4 L) = (1.8 - 0.2)^2 / 8
        let f = DiagQuadratic::norm_sq(3);
        let active = ActiveSet::from_parts(
            vec![Point::unit(3, 0), Point::unit(3, 1)],
            vec![0.9, 0.1],
        )
        .unwrap();
        let fx = f.value(active.iterate());
        let (out, outcome) = simplex_descent(&f, &active, 2.0).unwrap();
        assert_eq!(outcome, SimplexDescentOutcome::Descent);
        let fy = f.value(out.iterate());
        assert!((fx - 0.82).abs() < 1e-15);
        assert!((fy - 0.5).abs() < 1e-12);
        assert!(fx - fy >= (1.8f64 - 0.2).powi(2) / 8.0 - 1e-12);
    }

    #[test]
    fn singleton_set_is_stationary() {
        let f = DiagQuadratic::norm_sq(2);
        let active = ActiveSet::singleton(Point::unit(2, 0));
        let (_, outcome) = simplex_descent(&f, &active, 2.0).unwrap();
        assert_eq!(outcome, SimplexDescentOutcome::Stationary);
    }

    #[test]
    fn bcg_stops_immediately_from_optimal_vertex() {
        let f = DiagQuadratic::new(vec![1.0, 1.0], vec![1.0, 0.0]);
        let region = FeasibleRegion::Simplex { n: 2 };
        let config = RunConfig {
            tol: 1e-12,
            start: StartPoint::Given(Point::unit(2, 0)),
            ..Default::default()
        };
        let res = run_bcg(&f, &region, &config, 1.0).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn bcg_converges_on_simplex_quadratic() {
        // from e1: phi0 = g(e1)/2 = 1 and the singleton active set has
        // zero gap, so the early steps come from the oracle branch; the
        // exact line search from (1/2,1/2,0) towards e3 lands directly on
        // the barycenter, which the next negative answer certifies
        let f = DiagQuadratic::norm_sq(3);
        let region = FeasibleRegion::Simplex { n: 3 };
        let config = RunConfig {
            max_iters: 200,
            tol: 1e-9,
            start: StartPoint::Given(Point::unit(3, 0)),
            keep_iterates: true,
            ..Default::default()
        };
        let res = run_bcg(&f, &region, &config, 1.0).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        assert!(res.stats.fw_steps >= 2);
        let xs = res.iterates.as_ref().unwrap();
        // first oracle step lands on the segment [e1, e2]
        assert_eq!(xs[1].coords()[2], 0.0);
        assert!(xs[1].coords()[1] > 0.0);
        // optimum is the barycenter, hit within a handful of iterations
        assert!(res.iterations <= 5, "took {} iterations", res.iterations);
        for &xi in res.x.coords() {
            assert!((xi - 1.0 / 3.0).abs() <= 1e-9);
        }
        // monotone in f
        let vals: Vec<f64> = res.trace.rows.iter().map(|r| r.f_value).collect();
        assert!(vals.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    }
}
