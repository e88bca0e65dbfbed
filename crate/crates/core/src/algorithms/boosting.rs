//! Boosted Frank-Wolfe: build a better-aligned descent direction from a few
//! rounds of gradient pursuit over the feasible region.

use crate::error::Result;
use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::step::{line_search, short_step, StepContext, StepRule};
use crate::trace::Counters;

/// Boosting parameters.
#[derive(Debug, Clone, Copy)]
pub struct BoostConfig {
    /// Maximum alignment rounds per iteration.
    pub max_rounds: u64,
    /// Minimum cosine-alignment improvement to accept another round.
    pub delta: f64,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig { max_rounds: 128, delta: 1e-3 }
    }
}

fn cosine(target: &Point, d: &Point) -> f64 {
    let nd = d.norm();
    if nd == 0.0 {
        return -1.0;
    }
    target.dot(d) / (target.norm() * nd)
}

/// The gradient-pursuit procedure: decompose `-grad f(x)` into directions
/// `v_k - x` (and backtracking components `-d_k/||d_k||`), accumulating the
/// scaled direction `g = d/Lambda` with `x + g` feasible.
///
/// Returns `(g, rounds accepted, lmo calls, fw_gap at x)`; when no round is
/// accepted (`Lambda = 0`, i.e. the gradient vanishes or `x` is already a
/// minimizer of the linearization) the plain Frank-Wolfe direction is
/// returned. The first round's pursuit vertex doubles as the Frank-Wolfe
/// vertex, so the gap comes for free.
pub fn boost_direction(
    _objective: &dyn Objective,
    x: &Point,
    region: &FeasibleRegion,
    boost: &BoostConfig,
    grad: &Point,
) -> Result<(Point, u64, u64, f64)> {
    let neg_grad = grad.scale(-1.0);
    let mut d = Point::zeros(x.dim()).with_shape(x.shape());
    let mut lambda_sum = 0.0f64;
    let mut rounds = 0u64;
    let mut lmo_calls = 0u64;
    let mut fw_gap = f64::NAN;
    let mut fw_dir: Option<Point> = None;
    let mut cos_prev = -1.0f64;

    for k in 0..boost.max_rounds {
        // residual r = -grad - d
        let mut r = neg_grad.clone();
        r.add_scaled(-1.0, &d);
        // v = argmax <r, v> over the region = lmo(-r)
        let v = region.lmo(&r.scale(-1.0))?;
        lmo_calls += 1;
        if k == 0 {
            // the round-0 vertex is the Frank-Wolfe vertex of grad
            fw_gap = grad.dot(&x.sub(&v));
            fw_dir = Some(v.sub(x));
        }
        let toward = v.sub(x);
        let d_norm = d.norm();
        let (u, is_backward) = if d_norm > 0.0 {
            let back = d.scale(-1.0 / d_norm);
            if r.dot(&back) > r.dot(&toward) {
                (back, true)
            } else {
                (toward, false)
            }
        } else {
            (toward, false)
        };
        let u_norm_sq = u.norm_sq();
        if u_norm_sq == 0.0 {
            break;
        }
        let lam = r.dot(&u) / u_norm_sq;
        if lam <= 0.0 {
            break;
        }
        let mut d_next = d.clone();
        d_next.add_scaled(lam, &u);
        let cos_next = cosine(&neg_grad, &d_next);
        if cos_next - cos_prev >= boost.delta {
            if is_backward {
                lambda_sum *= 1.0 - lam / d_norm;
            } else {
                lambda_sum += lam;
            }
            d = d_next;
            cos_prev = cos_next;
            rounds += 1;
        } else {
            break;
        }
    }

    if rounds == 0 || lambda_sum <= 0.0 {
        // fall back to the plain Frank-Wolfe direction
        let g = match fw_dir {
            Some(dir) => dir,
            None => region.lmo(grad)?.sub(x),
        };
        return Ok((g, 0, lmo_calls, fw_gap));
    }
    if rounds == 1 {
        // single accepted round: d = lambda (v0 - x), so g is exactly the
        // Frank-Wolfe direction; return it without the divide round-trip
        if let Some(dir) = &fw_dir {
            return Ok((dir.clone(), 1, lmo_calls, fw_gap));
        }
    }
    Ok((d.scale(1.0 / lambda_sum), rounds, lmo_calls, fw_gap))
}

/// Boosted Frank-Wolfe: `x_{t+1} = x_t + gamma_t g_t` with `g_t` from
/// [`boost_direction`] and a short-step or line-search rule over `[0, 1]`.
pub fn run_boostfw(
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
    boost: &BoostConfig,
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

    for t in 0..config.max_iters {
        rec.observe(&x);
        let fx = objective.value(&x);
        let grad = objective.gradient(&x);
        counters.foo_calls += 1;
        let (g_dir, _rounds, lmo_used, fw_gap) =
            boost_direction(objective, &x, region, boost, &grad)?;
        counters.lmo_calls += lmo_used;
        if fw_gap <= config.tol {
            rec.record(t, fx, fw_gap, 0.0, counters, 0, true);
            stop = StopReason::Converged;
            iterations = t;
            break;
        }
        // move along g: x <- x + gamma g = x - gamma (-g)
        let d = g_dir.scale(-1.0);
        let dir_derivative = grad.dot(&d); // = <-grad, g> >= 0 by construction
        let gamma = match &config.step_rule {
            StepRule::LineSearch => line_search(objective, &x, &d, 1.0, Some(dir_derivative)),
            _ => {
                let l = objective.smoothness().ok_or_else(|| {
                    crate::error::Error::ContractViolation(
                        "boosted runner needs line search or a declared L".into(),
                    )
                })?;
                short_step(&StepContext {
                    t,
                    dir_derivative,
                    dir_norm_sq: d.norm_sq(),
                    gamma_max: 1.0,
                    l_estimate: l,
                })?
            }
        };
        rec.record(t, fx, fw_gap, gamma, counters, 0, t + 1 == config.max_iters);
        stats.fw_steps += 1;
        x.add_scaled(gamma, &g_dir);
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(&x);
    }
    let f_final = objective.value(&x);
    Ok(rec.finish(x, f_final, stop, iterations, counters, stats, None))
}
