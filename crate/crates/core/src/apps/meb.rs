//! Minimum enclosing ball via its concave dual over the probability
//! simplex, solved by Frank-Wolfe with the exact closed-form line search.

use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Debug, Clone)]
pub struct MebResult {
    /// Indices with dual weight above 1e-12: the coreset.
    pub coreset: Vec<usize>,
    pub center: Point,
    /// Squared radius = dual objective at the final weights.
    pub radius_sq: f64,
    /// Dual weights on the simplex over input points.
    pub dual_weights: Vec<f64>,
    pub iterations: u64,
    /// Final Frank-Wolfe gap of the (maximization) dual.
    pub fw_gap: f64,
}

/// Dual objective `f(x) = sum_i x_i ||a_i||^2 - ||sum_i x_i a_i||^2`,
/// maximized over the simplex. At the optimum the center is
/// `sum x_i a_i` and the squared radius is `f(x)`.
fn dual_value(points: &[Point], weights: &[f64], center: &Point) -> f64 {
    let s: f64 = weights.iter().zip(points).map(|(&w, a)| w * a.norm_sq()).sum();
    s - center.norm_sq()
}

fn center_of(points: &[Point], weights: &[f64]) -> Point {
    let mut c = Point::zeros(points[0].dim());
    for (a, &w) in points.iter().zip(weights) {
        if w != 0.0 {
            c.add_scaled(w, a);
        }
    }
    c
}

/// Compute the minimum enclosing ball of `points` to dual Frank-Wolfe gap
/// `eps`: Frank-Wolfe on the dual with start `x0 = e_{argmax f(e_i)}` and
/// the closed-form line search of the concave quadratic. The center is
/// refreshed from the weights every iteration, so there is no drift.
pub fn meb_coreset(points: &[Point], eps: f64, max_iters: u64) -> Result<MebResult> {
    if points.is_empty() {
        return Err(Error::ContractViolation("need at least one point".into()));
    }
    let m = points.len();
    // f(e_i) = 0 for every i, so the argmax start is the first index
    let mut weights = vec![0.0; m];
    weights[0] = 1.0;
    let mut center = center_of(points, &weights);
    let mut iterations = 0;
    let mut gap = f64::INFINITY;

    for t in 0..max_iters {
        // gradient of the dual: grad_i = ||a_i||^2 - 2 <a_i, c>
        let grad: Vec<f64> =
            points.iter().map(|a| a.norm_sq() - 2.0 * a.dot(&center)).collect();
        let grad_dot_x: f64 = grad.iter().zip(&weights).map(|(g, w)| g * w).sum();
        let (mut best_i, mut best_g) = (0usize, f64::NEG_INFINITY);
        for (i, &g) in grad.iter().enumerate() {
            if g > best_g {
                best_g = g;
                best_i = i;
            }
        }
        gap = best_g - grad_dot_x;
        if gap <= eps {
            iterations = t;
            break;
        }
        // exact line search towards e_i: gamma* = gap / (2 ||a_i - c||^2)
        let diff = points[best_i].sub(&center);
        let denom = 2.0 * diff.norm_sq();
        let gamma = if denom > 0.0 { (gap / denom).min(1.0) } else { 1.0 };
        for w in weights.iter_mut() {
            *w *= 1.0 - gamma;
        }
        weights[best_i] += gamma;
        center = center_of(points, &weights);
        iterations = t + 1;
    }

    let radius_sq = dual_value(points, &weights, &center);
    let coreset: Vec<usize> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 1e-12)
        .map(|(i, _)| i)
        .collect();
    Ok(MebResult { coreset, center, radius_sq, dual_weights: weights, iterations, fw_gap: gap })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points_on_the_line() {
        let pts = vec![Point::new(vec![-1.0]), Point::new(vec![1.0])];
        let res = meb_coreset(&pts, 1e-12, 100).unwrap();
        assert!(res.center.coords()[0].abs() <= 1e-12);
        assert!((res.radius_sq - 1.0).abs() <= 1e-12);
        assert!((res.dual_weights[0] - 0.5).abs() <= 1e-12);
        assert!((res.dual_weights[1] - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn interior_point_gets_no_weight() {
        let pts = vec![
            Point::new(vec![-1.0]),
            Point::new(vec![0.0]),
            Point::new(vec![1.0]),
        ];
        let res = meb_coreset(&pts, 1e-12, 200).unwrap();
        assert_eq!(res.coreset, vec![0, 2]);
        assert!((res.radius_sq - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn all_points_enclosed_within_duality_slack() {
        // deterministic pseudo-random 3-D instance
        let mut state = 12345u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) * 2.0 - 1.0
        };
        let pts: Vec<Point> =
            (0..40).map(|_| Point::new(vec![next(), next(), next()])).collect();
        let res = meb_coreset(&pts, 1e-9, 20_000).unwrap();
        let r = (res.radius_sq + res.fw_gap).sqrt();
        for p in &pts {
            assert!(p.sub(&res.center).norm() <= r + 1e-8);
        }
    }
}
