//! Objective functions: a value + gradient oracle with optional constants.

use crate::point::Point;

/// A differentiable objective over some feasible region.
///
/// Gradients are hand-coded per objective; `finite_diff_check` in
/// [`crate::gap`] validates them against central differences.
pub trait Objective {
    fn value(&self, x: &Point) -> f64;
    fn gradient(&self, x: &Point) -> Point;

    /// Smoothness constant `L`, when known.
    fn smoothness(&self) -> Option<f64> {
        None
    }

    /// Strong-convexity constant `mu`, when known.
    fn strong_convexity(&self) -> Option<f64> {
        None
    }

    /// Optimal value `f(x*)` over the intended region, when known.
    /// Enables primal-gap reporting in traces.
    fn optimum_value(&self) -> Option<f64> {
        None
    }

    /// Directional curvature `d^T (Hessian) d` when the objective is a
    /// quadratic (constant Hessian). Enables exact closed-form line search.
    fn curvature_along(&self, _x: &Point, _d: &Point) -> Option<f64> {
        None
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn value(&self, x: &Point) -> f64 {
        (**self).value(x)
    }
    fn gradient(&self, x: &Point) -> Point {
        (**self).gradient(x)
    }
    fn smoothness(&self) -> Option<f64> {
        (**self).smoothness()
    }
    fn strong_convexity(&self) -> Option<f64> {
        (**self).strong_convexity()
    }
    fn optimum_value(&self) -> Option<f64> {
        (**self).optimum_value()
    }
    fn curvature_along(&self, x: &Point, d: &Point) -> Option<f64> {
        (**self).curvature_along(x, d)
    }
}
