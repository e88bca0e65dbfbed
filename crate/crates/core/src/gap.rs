//! Optimality certificates: the Frank-Wolfe gap, its strong (active-set)
//! variant, and the finite-difference gradient check.

use crate::active_set::ActiveSet;
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;

/// Result of a Frank-Wolfe gap evaluation.
#[derive(Debug, Clone)]
pub struct GapReport {
    /// `g(x) = <grad f(x), x - v>` with `v` the LMO answer; `>= 0` for
    /// feasible `x` and an upper bound on the primal gap for convex `f`.
    pub fw_gap: f64,
    /// The minimizing vertex `v`.
    pub fw_vertex: Point,
    /// `<grad f(x), v_away - v>` over a supplied active set, when computed.
    pub strong_fw_gap: Option<f64>,
}

/// Frank-Wolfe gap `g(x) = <grad f(x), x - v>`, `v = lmo(grad f(x))`.
pub fn fw_gap(
    objective: &dyn Objective,
    x: &Point,
    region: &FeasibleRegion,
) -> Result<GapReport> {
    let grad = objective.gradient(x);
    if !grad.is_finite() {
        return Err(Error::NumericFailure("non-finite gradient".into()));
    }
    let v = region.lmo(&grad)?;
    let gap = grad.dot(&x.sub(&v));
    Ok(GapReport { fw_gap: gap, fw_vertex: v, strong_fw_gap: None })
}

/// Strong Frank-Wolfe gap `<grad f(x), v_away - v_fw>` for an iterate with
/// an explicit convex decomposition. Always at least the plain gap.
pub fn strong_fw_gap(
    objective: &dyn Objective,
    active: &ActiveSet,
    region: &FeasibleRegion,
) -> Result<f64> {
    if active.is_empty() {
        return Err(Error::ContractViolation("empty active set".into()));
    }
    let x = active.iterate();
    let grad = objective.gradient(x);
    if !grad.is_finite() {
        return Err(Error::NumericFailure("non-finite gradient".into()));
    }
    let v_fw = region.lmo(&grad)?;
    let (_, away_val) = active.away_atom(&grad);
    Ok(away_val - grad.dot(&v_fw))
}

/// Central-difference gradient check: returns the maximum over coordinates
/// of `|fd_i - grad_i| / max(1, |grad_i|)`.
pub fn finite_diff_check(objective: &dyn Objective, x: &Point, h: f64) -> f64 {
    let grad = objective.gradient(x);
    let mut worst = 0.0f64;
    let mut xp = x.clone();
    for i in 0..x.dim() {
        let xi = x.coords()[i];
        xp.coords_mut()[i] = xi + h;
        let fp = objective.value(&xp);
        xp.coords_mut()[i] = xi - h;
        let fm = objective.value(&xp);
        xp.coords_mut()[i] = xi;
        let fd = (fp - fm) / (2.0 * h);
        let gi = grad.coords()[i];
        worst = worst.max((fd - gi).abs() / gi.abs().max(1.0));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::DiagQuadratic;

    #[test]
    fn gap_zero_at_simplex_barycenter() {
        let f = DiagQuadratic::norm_sq(3);
        let r = FeasibleRegion::Simplex { n: 3 };
        let x = Point::new(vec![1.0 / 3.0; 3]);
        let rep = fw_gap(&f, &x, &r).unwrap();
        assert!(rep.fw_gap.abs() < 1e-15);
    }

    #[test]
    fn gap_at_a_vertex() {
        let f = DiagQuadratic::norm_sq(3);
        let r = FeasibleRegion::Simplex { n: 3 };
        let rep = fw_gap(&f, &Point::unit(3, 0), &r).unwrap();
        assert_eq!(rep.fw_gap, 2.0);
        assert_eq!(rep.fw_vertex, Point::unit(3, 1)); // lowest-index tie break
    }

    #[test]
    fn gap_on_interval() {
        // f = x^2 over [-1, 1] at x = 1: grad = 2, v = -1, gap = 4
        let f = DiagQuadratic::norm_sq(1);
        let r = FeasibleRegion::Box { lower: vec![-1.0], upper: vec![1.0] };
        let rep = fw_gap(&f, &Point::new(vec![1.0]), &r).unwrap();
        assert_eq!(rep.fw_gap, 4.0);
        assert_eq!(rep.fw_vertex.coords(), &[-1.0]);
    }

    #[test]
    fn strong_gap_vertex_example() {
        let f = DiagQuadratic::norm_sq(3);
        let r = FeasibleRegion::Simplex { n: 3 };
        let active = ActiveSet::singleton(Point::unit(3, 0));
        let s = strong_fw_gap(&f, &active, &r).unwrap();
        assert_eq!(s, 2.0); // v_away = e1, v_fw = e2
    }

    #[test]
    fn strong_gap_zero_at_optimum() {
        let f = DiagQuadratic::norm_sq(2);
        let r = FeasibleRegion::Simplex { n: 2 };
        let active = ActiveSet::from_parts(
            vec![Point::unit(2, 0), Point::unit(2, 1)],
            vec![0.5, 0.5],
        )
        .unwrap();
        let s = strong_fw_gap(&f, &active, &r).unwrap();
        assert!(s.abs() < 1e-15);
    }

    #[test]
    fn strong_gap_matches_brute_force_on_random_quadratics() {
        let r = FeasibleRegion::Simplex { n: 5 };
        let mut state = 99u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64) / ((1u64 << 53) as f64)
        };
        for _ in 0..50 {
            let f = DiagQuadratic::new(
                (0..5).map(|_| 0.5 + next()).collect(),
                (0..5).map(|_| next() - 0.2).collect(),
            );
            // random active subset of vertices with random weights
            let k = 2 + (next() * 3.0) as usize;
            let atoms: Vec<Point> = (0..k).map(|i| Point::unit(5, i)).collect();
            let mut w: Vec<f64> = (0..k).map(|_| 0.1 + next()).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= s);
            let active = ActiveSet::from_parts(atoms.clone(), w).unwrap();

            let got = strong_fw_gap(&f, &active, &r).unwrap();
            let grad = f.gradient(active.iterate());
            let max_active = atoms
                .iter()
                .map(|a| grad.dot(a))
                .fold(f64::NEG_INFINITY, f64::max);
            let min_vertex = r
                .enumerate_vertices()
                .unwrap()
                .iter()
                .map(|v| grad.dot(v))
                .fold(f64::INFINITY, f64::min);
            assert!((got - (max_active - min_vertex)).abs() <= 1e-12);

            // strong gap dominates the plain gap
            let plain = fw_gap(&f, active.iterate(), &r).unwrap().fw_gap;
            assert!(got >= plain - 1e-12);
        }
    }

    #[test]
    fn finite_diff_on_quadratic() {
        let f = DiagQuadratic::norm_sq(2);
        let x = Point::new(vec![1.0, 2.0]);
        assert!(finite_diff_check(&f, &x, 1e-5) <= 1e-7);
    }
}
