//! The objectives shipped with the benchmark harness.

use crate::objective::Objective;
use crate::point::Point;

/// Separable quadratic `f(x) = sum_i w_i (x_i - c_i)^2 + offset`.
///
/// Exact constants: `L = 2 max w_i`, `mu = 2 min w_i`.
#[derive(Debug, Clone)]
pub struct DiagQuadratic {
    pub weights: Vec<f64>,
    pub center: Vec<f64>,
    pub offset: f64,
    optimum: Option<f64>,
}

impl DiagQuadratic {
    pub fn new(weights: Vec<f64>, center: Vec<f64>) -> Self {
        assert_eq!(weights.len(), center.len());
        assert!(weights.iter().all(|&w| w > 0.0));
        DiagQuadratic { weights, center, offset: 0.0, optimum: None }
    }

    /// Plain `||x||_2^2`.
    pub fn norm_sq(n: usize) -> Self {
        DiagQuadratic::new(vec![1.0; n], vec![0.0; n])
    }

    pub fn with_optimum(mut self, f_star: f64) -> Self {
        self.optimum = Some(f_star);
        self
    }
}

impl Objective for DiagQuadratic {
    fn value(&self, x: &Point) -> f64 {
        let mut s = self.offset;
        for ((&xi, &wi), &ci) in x.coords().iter().zip(&self.weights).zip(&self.center) {
            let d = xi - ci;
            s += wi * d * d;
        }
        s
    }

    fn gradient(&self, x: &Point) -> Point {
        let g: Vec<f64> = x
            .coords()
            .iter()
            .zip(&self.weights)
            .zip(&self.center)
            .map(|((&xi, &wi), &ci)| 2.0 * wi * (xi - ci))
            .collect();
        Point::new(g).with_shape(x.shape())
    }

    fn smoothness(&self) -> Option<f64> {
        self.weights.iter().cloned().reduce(f64::max).map(|w| 2.0 * w)
    }

    fn strong_convexity(&self) -> Option<f64> {
        self.weights.iter().cloned().reduce(f64::min).map(|w| 2.0 * w)
    }

    fn optimum_value(&self) -> Option<f64> {
        self.optimum
    }

    fn curvature_along(&self, _x: &Point, d: &Point) -> Option<f64> {
        Some(
            d.coords()
                .iter()
                .zip(&self.weights)
                .map(|(&di, &wi)| 2.0 * wi * di * di)
                .sum(),
        )
    }
}

/// Dense quadratic `f(x) = 1/2 ||M x||^2 + <b, x>` with Hessian `M^T M`.
#[derive(Debug, Clone)]
pub struct DenseQuadratic {
    /// Row-major `k x n` matrix.
    pub m: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    smoothness: Option<f64>,
    optimum: Option<f64>,
}

impl DenseQuadratic {
    pub fn new(m: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        assert!(m.iter().all(|row| row.len() == b.len()));
        let mut q = DenseQuadratic { m, b, smoothness: None, optimum: None };
        q.smoothness = Some(q.estimate_smoothness());
        q
    }

    pub fn with_optimum(mut self, f_star: f64) -> Self {
        self.optimum = Some(f_star);
        self
    }

    fn mx(&self, x: &[f64]) -> Vec<f64> {
        self.m
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `lambda_max(M^T M)` by power iteration, padded by 1e-9 relative.
    fn estimate_smoothness(&self) -> f64 {
        let n = self.b.len();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut lam = 0.0;
        for _ in 0..2000 {
            let mv = self.mx(&v);
            // w = M^T (M v)
            let mut w = vec![0.0; n];
            for (row, &mvi) in self.m.iter().zip(&mv) {
                for (wj, &aij) in w.iter_mut().zip(row) {
                    *wj += aij * mvi;
                }
            }
            let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nw == 0.0 {
                return 0.0;
            }
            let new_lam = nw;
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / nw;
            }
            if (new_lam - lam).abs() <= 1e-13 * new_lam {
                lam = new_lam;
                break;
            }
            lam = new_lam;
        }
        lam * (1.0 + 1e-9)
    }
}

impl Objective for DenseQuadratic {
    fn value(&self, x: &Point) -> f64 {
        let mx = self.mx(x.coords());
        0.5 * mx.iter().map(|v| v * v).sum::<f64>()
            + self.b.iter().zip(x.coords()).map(|(a, b)| a * b).sum::<f64>()
    }

    fn gradient(&self, x: &Point) -> Point {
        let mx = self.mx(x.coords());
        let mut g = self.b.clone();
        for (row, &mxi) in self.m.iter().zip(&mx) {
            for (gj, &aij) in g.iter_mut().zip(row) {
                *gj += aij * mxi;
            }
        }
        Point::new(g).with_shape(x.shape())
    }

    fn smoothness(&self) -> Option<f64> {
        self.smoothness
    }

    fn optimum_value(&self) -> Option<f64> {
        self.optimum
    }

    fn curvature_along(&self, _x: &Point, d: &Point) -> Option<f64> {
        let md = self.mx(d.coords());
        Some(md.iter().map(|v| v * v).sum())
    }
}

/// `f(x) = ||x - u||_p^2` for `p >= 2`, the approximate-Caratheodory
/// objective. Smooth with `L = 2(p - 1)` in the Euclidean norm.
#[derive(Debug, Clone)]
pub struct DistancePower {
    pub u: Point,
    pub p: f64,
}

impl DistancePower {
    pub fn new(u: Point, p: f64) -> Self {
        assert!(p >= 2.0, "p < 2 is nonsmooth; see the smoothing runner");
        DistancePower { u, p }
    }
}

impl Objective for DistancePower {
    fn value(&self, x: &Point) -> f64 {
        let d = x.sub(&self.u);
        let np = d.norm_p(self.p);
        np * np
    }

    fn gradient(&self, x: &Point) -> Point {
        let d = x.sub(&self.u);
        let np = d.norm_p(self.p);
        if np < 1e-300 {
            return Point::zeros(x.dim()).with_shape(x.shape());
        }
        // grad_i = 2 ||d||_p^{2-p} |d_i|^{p-1} sign(d_i)
        let scale = 2.0 * np.powf(2.0 - self.p);
        let g: Vec<f64> = d
            .coords()
            .iter()
            .map(|&di| scale * di.abs().powf(self.p - 1.0) * di.signum())
            .collect();
        Point::new(g).with_shape(x.shape())
    }

    fn smoothness(&self) -> Option<f64> {
        Some(2.0 * (self.p - 1.0))
    }

    fn optimum_value(&self) -> Option<f64> {
        // u is required to be feasible in the Caratheodory setting.
        Some(0.0)
    }

    fn curvature_along(&self, _x: &Point, d: &Point) -> Option<f64> {
        if self.p == 2.0 {
            Some(2.0 * d.norm_sq())
        } else {
            None
        }
    }
}

/// Logistic loss `f(x) = sum_i ln(1 + exp(-y_i <z_i, x>))`.
#[derive(Debug, Clone)]
pub struct Logistic {
    pub samples: Vec<Vec<f64>>,
    pub labels: Vec<f64>,
}

impl Logistic {
    pub fn new(samples: Vec<Vec<f64>>, labels: Vec<f64>) -> Self {
        assert_eq!(samples.len(), labels.len());
        Logistic { samples, labels }
    }
}

impl Objective for Logistic {
    fn value(&self, x: &Point) -> f64 {
        self.samples
            .iter()
            .zip(&self.labels)
            .map(|(z, &y)| {
                let m: f64 = z.iter().zip(x.coords()).map(|(a, b)| a * b).sum();
                // ln(1 + e^{-ym}), numerically stable
                let t = -y * m;
                if t > 0.0 {
                    t + (1.0 + (-t).exp()).ln()
                } else {
                    (1.0 + t.exp()).ln()
                }
            })
            .sum()
    }

    fn gradient(&self, x: &Point) -> Point {
        let mut g = vec![0.0; x.dim()];
        for (z, &y) in self.samples.iter().zip(&self.labels) {
            let m: f64 = z.iter().zip(x.coords()).map(|(a, b)| a * b).sum();
            let s = -y / (1.0 + (y * m).exp());
            for (gj, &zj) in g.iter_mut().zip(z) {
                *gj += s * zj;
            }
        }
        Point::new(g).with_shape(x.shape())
    }

    fn smoothness(&self) -> Option<f64> {
        // L <= 1/4 sum_i ||z_i||^2 (upper bound on lambda_max of the Hessian)
        Some(0.25 * self.samples.iter().map(|z| z.iter().map(|v| v * v).sum::<f64>()).sum::<f64>())
    }
}

/// Separable smooth nonconvex objective
/// `f(x) = sum_i [ a/2 (x_i - c_i)^2 + b sin(w x_i) ]`, `L = a + b w^2`.
///
/// Nonconvex whenever `b w^2 > a`. Being separable, its global minimum over
/// a box is the sum of per-coordinate minima, which a 1-D grid oracle can
/// certify in tests.
#[derive(Debug, Clone)]
pub struct SinQuadratic {
    pub a: f64,
    pub b: f64,
    pub w: f64,
    pub center: Vec<f64>,
    optimum: Option<f64>,
}

impl SinQuadratic {
    pub fn new(a: f64, b: f64, w: f64, center: Vec<f64>) -> Self {
        assert!(a > 0.0 && b >= 0.0 && w > 0.0);
        SinQuadratic { a, b, w, center, optimum: None }
    }

    pub fn with_optimum(mut self, f_star: f64) -> Self {
        self.optimum = Some(f_star);
        self
    }
}

impl Objective for SinQuadratic {
    fn value(&self, x: &Point) -> f64 {
        x.coords()
            .iter()
            .zip(&self.center)
            .map(|(&xi, &ci)| 0.5 * self.a * (xi - ci) * (xi - ci) + self.b * (self.w * xi).sin())
            .sum()
    }

    fn gradient(&self, x: &Point) -> Point {
        let g: Vec<f64> = x
            .coords()
            .iter()
            .zip(&self.center)
            .map(|(&xi, &ci)| self.a * (xi - ci) + self.b * self.w * (self.w * xi).cos())
            .collect();
        Point::new(g).with_shape(x.shape())
    }

    fn smoothness(&self) -> Option<f64> {
        Some(self.a + self.b * self.w * self.w)
    }

    fn optimum_value(&self) -> Option<f64> {
        self.optimum
    }
}

/// Negated minimum-enclosing-ball dual
/// `f(x) = ||sum_i x_i a_i||^2 - sum_i x_i ||a_i||^2`, minimized over the
/// simplex (the solver maximizes its negation).
#[derive(Debug, Clone)]
pub struct MebDual {
    pub points: Vec<Point>,
}

impl Objective for MebDual {
    fn value(&self, x: &Point) -> f64 {
        let mut c = Point::zeros(self.points[0].dim());
        for (a, &w) in self.points.iter().zip(x.coords()) {
            c.add_scaled(w, a);
        }
        let s: f64 = self.points.iter().zip(x.coords()).map(|(a, &w)| w * a.norm_sq()).sum();
        c.norm_sq() - s
    }

    fn gradient(&self, x: &Point) -> Point {
        let mut c = Point::zeros(self.points[0].dim());
        for (a, &w) in self.points.iter().zip(x.coords()) {
            c.add_scaled(w, a);
        }
        Point::new(self.points.iter().map(|a| 2.0 * a.dot(&c) - a.norm_sq()).collect())
    }

    fn curvature_along(&self, _x: &Point, d: &Point) -> Option<f64> {
        let mut p = Point::zeros(self.points[0].dim());
        for (a, &w) in self.points.iter().zip(d.coords()) {
            p.add_scaled(w, a);
        }
        Some(2.0 * p.norm_sq())
    }
}
