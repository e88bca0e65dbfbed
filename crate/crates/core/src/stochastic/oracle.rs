//! Stochastic first-order oracles.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::objective::Objective;
use crate::point::Point;

/// A stochastic first-order oracle for `f`: draws one realization
/// `grad F~(x, z)` per sample.
pub trait StochasticOracle {
    fn dim(&self) -> usize;

    /// One stochastic gradient at `x` (one fresh sample `z`).
    fn sample(&self, x: &Point, rng: &mut ChaCha8Rng) -> Point;

    /// Evaluate the *same* sample `z` at two points, as the difference
    /// estimators require.
    fn sample_pair(&self, x: &Point, x2: &Point, rng: &mut ChaCha8Rng) -> (Point, Point);

    /// Exact gradient, when available (variance-reduced snapshots).
    fn exact_gradient(&self, _x: &Point) -> Option<Point> {
        None
    }

    /// Variance bound `sigma^2` of single samples, when declared.
    fn variance_bound(&self) -> Option<f64> {
        None
    }
}

/// Additive Gaussian noise on an exact gradient:
/// `grad F~(x, z) = grad f(x) + sigma z`, `z ~ N(0, I)`.
///
/// `sigma = 0` returns the exact gradient bit-for-bit, which grounds the
/// zero-noise reduction property of the stochastic runners.
pub struct GaussianNoiseOracle<'a> {
    pub objective: &'a dyn Objective,
    pub sigma: f64,
    pub dim: usize,
}

impl<'a> GaussianNoiseOracle<'a> {
    pub fn new(objective: &'a dyn Objective, sigma: f64, dim: usize) -> Self {
        GaussianNoiseOracle { objective, sigma, dim }
    }

    fn noise(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..self.dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    }
}

impl StochasticOracle for GaussianNoiseOracle<'_> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, x: &Point, rng: &mut ChaCha8Rng) -> Point {
        let g = self.objective.gradient(x);
        if self.sigma == 0.0 {
            return g;
        }
        let z = self.noise(rng);
        let mut out = g;
        for (gi, zi) in out.coords_mut().iter_mut().zip(&z) {
            *gi += self.sigma * zi;
        }
        out
    }

    fn sample_pair(&self, x: &Point, x2: &Point, rng: &mut ChaCha8Rng) -> (Point, Point) {
        let g1 = self.objective.gradient(x);
        let g2 = self.objective.gradient(x2);
        if self.sigma == 0.0 {
            return (g1, g2);
        }
        let z = self.noise(rng);
        let mut a = g1;
        let mut b = g2;
        for ((ai, bi), zi) in a.coords_mut().iter_mut().zip(b.coords_mut()).zip(&z) {
            *ai += self.sigma * zi;
            *bi += self.sigma * zi;
        }
        (a, b)
    }

    fn exact_gradient(&self, x: &Point) -> Option<Point> {
        Some(self.objective.gradient(x))
    }

    fn variance_bound(&self) -> Option<f64> {
        Some(self.sigma * self.sigma * self.dim as f64)
    }
}

/// Finite-sum oracle `f = (1/m) sum_i f_i` with uniform component sampling;
/// exact gradients are full passes.
pub struct FiniteSumOracle {
    pub components: Vec<Box<dyn Objective>>,
    pub dim: usize,
}

impl FiniteSumOracle {
    pub fn new(components: Vec<Box<dyn Objective>>, dim: usize) -> Self {
        assert!(!components.is_empty());
        FiniteSumOracle { components, dim }
    }

    fn pick(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..self.components.len())
    }
}

impl StochasticOracle for FiniteSumOracle {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample(&self, x: &Point, rng: &mut ChaCha8Rng) -> Point {
        self.components[self.pick(rng)].gradient(x)
    }

    fn sample_pair(&self, x: &Point, x2: &Point, rng: &mut ChaCha8Rng) -> (Point, Point) {
        let i = self.pick(rng);
        (self.components[i].gradient(x), self.components[i].gradient(x2))
    }

    fn exact_gradient(&self, x: &Point) -> Option<Point> {
        let m = self.components.len() as f64;
        let mut g = Point::zeros(self.dim);
        for c in &self.components {
            g.add_scaled(1.0 / m, &c.gradient(x));
        }
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::DiagQuadratic;
    use crate::stochastic::stream_rng;

    #[test]
    fn zero_sigma_is_exact_bitwise() {
        let f = DiagQuadratic::norm_sq(3);
        let oracle = GaussianNoiseOracle::new(&f, 0.0, 3);
        let x = Point::new(vec![0.3, -0.2, 0.7]);
        let mut rng = stream_rng(1, 0);
        assert_eq!(oracle.sample(&x, &mut rng), f.gradient(&x));
    }

    #[test]
    fn sample_mean_approaches_exact_gradient() {
        let f = DiagQuadratic::norm_sq(2);
        let sigma = 0.5;
        let oracle = GaussianNoiseOracle::new(&f, sigma, 2);
        let x = Point::new(vec![0.4, -0.1]);
        let n = 100_000;
        let mut mean = Point::zeros(2);
        let mut rng = stream_rng(42, 0);
        for _ in 0..n {
            mean.add_scaled(1.0 / n as f64, &oracle.sample(&x, &mut rng));
        }
        let exact = f.gradient(&x);
        let tol = 5.0 * sigma / (n as f64).sqrt();
        for (m, e) in mean.coords().iter().zip(exact.coords()) {
            assert!((m - e).abs() <= tol, "{m} vs {e}");
        }
    }

    #[test]
    fn paired_samples_share_noise() {
        let f = DiagQuadratic::norm_sq(2);
        let oracle = GaussianNoiseOracle::new(&f, 1.0, 2);
        let x = Point::new(vec![0.1, 0.2]);
        let y = Point::new(vec![0.3, -0.5]);
        let mut rng = stream_rng(5, 0);
        let (a, b) = oracle.sample_pair(&x, &y, &mut rng);
        let diff = a.sub(&b);
        let exact_diff = f.gradient(&x).sub(&f.gradient(&y));
        assert!(diff.max_abs_diff(&exact_diff) <= 1e-12); // noise cancels exactly
    }
}
