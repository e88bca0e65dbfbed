//! Approximate Caratheodory: express a feasible point as a sparse convex
//! combination of vertices by minimizing `||x - u||_p^2` with Frank-Wolfe.

use crate::active_set::{ActiveSet, ActiveSetUpdate};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::objectives::DistancePower;
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::step::open_loop_step;

#[derive(Debug, Clone)]
pub struct CaratheodoryResult {
    /// The sparse convex combination found.
    pub active: ActiveSet,
    /// `||x - u||_p` at termination.
    pub residual_norm: f64,
    pub p: f64,
    pub iterations: u64,
    /// Whether the target residual was reached within the budget.
    pub reached: bool,
}

/// Step rule for the decomposition run: the open-loop schedule carries the
/// sparsity guarantee; exact line search converges faster on symmetric
/// targets (and lands exactly on midpoints).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CaratheodoryStep {
    #[default]
    OpenLoop,
    LineSearch,
}

/// Approximate the feasible point `u` by a convex combination of few
/// vertices: Frank-Wolfe with the open-loop step `2/(t+2)` on
/// `f(x) = ||x - u||_p^2`, stopped at `||x - u||_p <= eps`.
///
/// The iterate after `t` steps uses at most `t + 1` distinct vertices.
/// `p >= 2` keeps the objective smooth (`p < 2` is nonsmooth; use the
/// smoothing runner instead).
pub fn approx_caratheodory(
    u: &Point,
    region: &FeasibleRegion,
    p: f64,
    eps: f64,
    max_iters: u64,
) -> Result<CaratheodoryResult> {
    approx_caratheodory_with(u, region, p, eps, max_iters, CaratheodoryStep::OpenLoop)
}

/// As [`approx_caratheodory`] with an explicit step rule.
pub fn approx_caratheodory_with(
    u: &Point,
    region: &FeasibleRegion,
    p: f64,
    eps: f64,
    max_iters: u64,
    step: CaratheodoryStep,
) -> Result<CaratheodoryResult> {
    if p < 2.0 {
        return Err(Error::Capability(
            "p < 2 is nonsmooth; see the hybrid smoothing runner".into(),
        ));
    }
    if eps < 0.0 {
        return Err(Error::ContractViolation("eps must be nonnegative".into()));
    }
    let objective = DistancePower::new(u.clone(), p);
    // start at the vertex minimizing the linearization at u's region center
    let x0 = region.lmo(&objective.gradient(&region.feasible_point()))?;
    let mut active = ActiveSet::singleton(x0);
    let mut residual = active.iterate().sub(u).norm_p(p);
    let mut iterations = 0;
    let mut reached = residual <= eps;

    for t in 0..max_iters {
        if reached {
            break;
        }
        let grad = objective.gradient(active.iterate());
        let v = region.lmo(&grad)?;
        let gamma = match step {
            CaratheodoryStep::OpenLoop => open_loop_step(t, 2),
            CaratheodoryStep::LineSearch => {
                let d = active.iterate().sub(&v);
                crate::step::line_search(&objective, active.iterate(), &d, 1.0, Some(grad.dot(&d)))
            }
        };
        active.update(ActiveSetUpdate::FwStep { vertex: v, gamma })?;
        debug_assert!(active.len() as u64 <= t + 2, "sparsity bound violated");
        iterations = t + 1;
        residual = active.iterate().sub(u).norm_p(p);
        reached = residual <= eps;
    }
    Ok(CaratheodoryResult { active, residual_norm: residual, p, iterations, reached })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_on_the_simplex_in_one_line_search_step() {
        // u = (0.5, 0.5, 0): symmetry gives gamma = 0.5 along e1 -> e2,
        // residual exactly 0 after one iteration
        let u = Point::new(vec![0.5, 0.5, 0.0]);
        let region = FeasibleRegion::Simplex { n: 3 };
        let res = approx_caratheodory_with(
            &u,
            &region,
            2.0,
            1e-9,
            10,
            CaratheodoryStep::LineSearch,
        )
        .unwrap();
        assert!(res.reached);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.active.len(), 2);
        assert_eq!(res.residual_norm, 0.0);
    }

    #[test]
    fn vertex_target_needs_zero_iterations() {
        let region = FeasibleRegion::Simplex { n: 4 };
        let u = Point::unit(4, 2);
        // start vertex = lmo(grad at barycenter) = the target itself
        let res = approx_caratheodory(&u, &region, 2.0, 1e-12, 10).unwrap();
        assert!(res.reached);
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn p_below_two_is_rejected() {
        let region = FeasibleRegion::Simplex { n: 3 };
        let u = Point::new(vec![0.4, 0.3, 0.3]);
        assert!(matches!(
            approx_caratheodory(&u, &region, 1.5, 0.1, 10),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn sparsity_never_exceeds_iterations_plus_one() {
        let region = FeasibleRegion::Simplex { n: 12 };
        let mut u = vec![0.0; 12];
        for (i, v) in u.iter_mut().enumerate().take(5) {
            *v = (i + 1) as f64 / 15.0;
        }
        let res = approx_caratheodory(&Point::new(u), &region, 2.0, 0.01, 500).unwrap();
        assert!(res.reached);
        assert!(res.active.len() as u64 <= res.iterations + 1);
    }
}
