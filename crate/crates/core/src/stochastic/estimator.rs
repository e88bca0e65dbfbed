//! The five gradient estimators of the stochastic runners.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::point::Point;

use super::oracle::StochasticOracle;

/// Batch-size schedules used by the estimators (rounded up to integers).
#[derive(Debug, Clone)]
pub enum BatchSchedule {
    Constant(u64),
    /// `ceil((t+2)^2 / alpha)` (plain stochastic Frank-Wolfe).
    SfwQuadratic { alpha: f64 },
    /// `6 (t+1)` (difference estimator between checkpoints).
    SpiderLinear,
    /// `48 (t+2)` (variance-reduced snapshot estimator).
    Svrf,
}

impl BatchSchedule {
    pub fn batch(&self, t: u64) -> u64 {
        match self {
            BatchSchedule::Constant(b) => (*b).max(1),
            BatchSchedule::SfwQuadratic { alpha } => {
                (((t + 2) as f64).powi(2) / alpha).ceil().max(1.0) as u64
            }
            BatchSchedule::SpiderLinear => 6 * (t + 1),
            BatchSchedule::Svrf => 48 * (t + 2),
        }
    }
}

/// Momentum schedules `rho_t` (with `rho_0 = 1` throughout).
#[derive(Debug, Clone)]
pub enum RhoSchedule {
    /// `4 / (t+8)^{2/3}`.
    Momentum,
    /// `1 / t` for `t >= 1`.
    OneOverT,
    Constant(f64),
}

impl RhoSchedule {
    pub fn rho(&self, t: u64) -> f64 {
        if t == 0 {
            return 1.0;
        }
        match self {
            RhoSchedule::Momentum => 4.0 / ((t + 8) as f64).powf(2.0 / 3.0),
            RhoSchedule::OneOverT => 1.0 / t as f64,
            RhoSchedule::Constant(r) => *r,
        }
    }
}

/// Stateful gradient construction. Checkpointed variants use the schedule
/// `s_k = 2^k - 1`.
#[derive(Debug, Clone)]
pub enum EstimatorState {
    /// Mean of `b_t` fresh samples.
    BatchMean { schedule: BatchSchedule },
    /// `(1 - rho) previous + rho sample` (biased, low variance).
    Momentum { rho: RhoSchedule, estimate: Option<Point> },
    /// Accumulated difference estimator with batch-mean checkpoints of size
    /// `ceil(sigma^2 (t+1)^2 / (L D)^2)`, capped at 1e6.
    Spider {
        estimate: Option<Point>,
        batch: BatchSchedule,
        sigma_sq: f64,
        l: f64,
        diameter: f64,
    },
    /// Differences against an exact snapshot gradient.
    Svrf {
        snapshot_x: Option<Point>,
        snapshot_grad: Option<Point>,
        batch: BatchSchedule,
    },
    /// One fresh sample per iteration with a bias-corrected momentum mix.
    OneSample { rho: RhoSchedule, estimate: Option<Point> },
}

impl EstimatorState {
    pub fn batch_mean(schedule: BatchSchedule) -> Self {
        EstimatorState::BatchMean { schedule }
    }

    pub fn momentum() -> Self {
        EstimatorState::Momentum { rho: RhoSchedule::Momentum, estimate: None }
    }

    pub fn spider(sigma_sq: f64, l: f64, diameter: f64) -> Self {
        EstimatorState::Spider {
            estimate: None,
            batch: BatchSchedule::SpiderLinear,
            sigma_sq,
            l,
            diameter,
        }
    }

    pub fn svrf() -> Self {
        EstimatorState::Svrf { snapshot_x: None, snapshot_grad: None, batch: BatchSchedule::Svrf }
    }

    pub fn one_sample() -> Self {
        EstimatorState::OneSample { rho: RhoSchedule::OneOverT, estimate: None }
    }
}

/// Checkpoint test for the `s_k = 2^k - 1` schedule.
pub fn is_checkpoint(t: u64) -> bool {
    (t + 1).is_power_of_two()
}

/// Incremental mean: exact when every term is identical, which grounds the
/// zero-noise reduction to the deterministic runners.
fn incremental_mean(mut points: impl Iterator<Item = Point>, dim: usize) -> Point {
    let mut mean = match points.next() {
        Some(p) => p,
        None => return Point::zeros(dim),
    };
    let mut k = 1.0;
    for p in points {
        k += 1.0;
        for (m, v) in mean.coords_mut().iter_mut().zip(p.coords()) {
            *m += (*v - *m) / k;
        }
    }
    mean
}

/// Advance the estimator one iteration and return
/// `(estimate, samples_used, exact_gradients_used)`.
///
/// Difference estimators evaluate each sample at both points (the same
/// realization), keeping the estimator correlated; the arithmetic groups
/// the correction as `(carried - mean_at_prev) + mean_at_current` so a
/// zero-noise oracle reproduces the exact gradient bit-for-bit.
pub fn estimate_gradient(
    state: &mut EstimatorState,
    oracle: &dyn StochasticOracle,
    x_t: &Point,
    x_prev: &Point,
    t: u64,
    rng: &mut ChaCha8Rng,
) -> Result<(Point, u64, u64)> {
    let dim = oracle.dim();
    match state {
        EstimatorState::BatchMean { schedule } => {
            let b = schedule.batch(t);
            let est = incremental_mean((0..b).map(|_| oracle.sample(x_t, rng)), dim);
            Ok((est, b, 0))
        }
        EstimatorState::Momentum { rho, estimate } => {
            let r = rho.rho(t);
            let sample = oracle.sample(x_t, rng);
            let est = match estimate.take() {
                Some(prev) if r < 1.0 => {
                    let mut e = prev.scale(1.0 - r);
                    e.add_scaled(r, &sample);
                    e
                }
                _ => sample,
            };
            *estimate = Some(est.clone());
            Ok((est, 1, 0))
        }
        EstimatorState::Spider { estimate, batch, sigma_sq, l, diameter } => {
            if is_checkpoint(t) || estimate.is_none() {
                let raw = *sigma_sq * ((t + 1) as f64).powi(2) / (*l * *diameter).powi(2);
                let b = (raw.ceil() as u64).clamp(1, 1_000_000);
                let est = incremental_mean((0..b).map(|_| oracle.sample(x_t, rng)), dim);
                *estimate = Some(est.clone());
                Ok((est, b, 0))
            } else {
                let b = batch.batch(t);
                let pairs: Vec<(Point, Point)> =
                    (0..b).map(|_| oracle.sample_pair(x_t, x_prev, rng)).collect();
                let mean_cur = incremental_mean(pairs.iter().map(|(a, _)| a.clone()), dim);
                let mean_prev = incremental_mean(pairs.iter().map(|(_, b)| b.clone()), dim);
                let carried = estimate.take().expect("spider estimate initialized");
                let mut est = carried;
                est.add_scaled(-1.0, &mean_prev);
                est = est.add(&mean_cur);
                *estimate = Some(est.clone());
                Ok((est, b, 0))
            }
        }
        EstimatorState::Svrf { snapshot_x, snapshot_grad, batch } => {
            if is_checkpoint(t) || snapshot_grad.is_none() {
                let exact = oracle.exact_gradient(x_t).ok_or_else(|| {
                    Error::Capability(
                        "variance-reduced snapshots need an exact gradient oracle".into(),
                    )
                })?;
                *snapshot_x = Some(x_t.clone());
                *snapshot_grad = Some(exact.clone());
                Ok((exact, 0, 1))
            } else {
                let b = batch.batch(t);
                let snap_x = snapshot_x.as_ref().expect("snapshot point set");
                let pairs: Vec<(Point, Point)> =
                    (0..b).map(|_| oracle.sample_pair(x_t, snap_x, rng)).collect();
                let mean_cur = incremental_mean(pairs.iter().map(|(a, _)| a.clone()), dim);
                let mean_snap = incremental_mean(pairs.iter().map(|(_, b)| b.clone()), dim);
                let mut est = snapshot_grad.clone().expect("snapshot gradient set");
                est.add_scaled(-1.0, &mean_snap);
                est = est.add(&mean_cur);
                Ok((est, b, 0))
            }
        }
        EstimatorState::OneSample { rho, estimate } => {
            let r = rho.rho(t);
            let est = match estimate.take() {
                Some(prev) if r < 1.0 => {
                    // (1 - rho)(prev - F~(x_{t-1}, z)) + F~(x_t, z)
                    let (cur, at_prev) = oracle.sample_pair(x_t, x_prev, rng);
                    let mut e = prev;
                    e.add_scaled(-1.0, &at_prev);
                    e = e.scale(1.0 - r);
                    e = e.add(&cur);
                    e
                }
                _ => oracle.sample(x_t, rng),
            };
            *estimate = Some(est.clone());
            Ok((est, 1, 0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::Objective;
    use crate::objectives::DiagQuadratic;
    use crate::stochastic::oracle::GaussianNoiseOracle;
    use crate::stochastic::stream_rng;

    #[test]
    fn momentum_first_step_is_the_sample() {
        let f = DiagQuadratic::norm_sq(2);
        let oracle = GaussianNoiseOracle::new(&f, 0.0, 2);
        let mut state = EstimatorState::momentum();
        let x = Point::new(vec![0.2, -0.4]);
        let mut rng = stream_rng(3, 0);
        let (est, used, _) = estimate_gradient(&mut state, &oracle, &x, &x, 0, &mut rng).unwrap();
        assert_eq!(est, f.gradient(&x));
        assert_eq!(used, 1);
    }

    #[test]
    fn spider_is_exact_under_zero_noise() {
        let f = DiagQuadratic::norm_sq(3);
        let oracle = GaussianNoiseOracle::new(&f, 0.0, 3);
        let mut state = EstimatorState::spider(0.0, 2.0, 2.0);
        let mut rng = stream_rng(1, 0);
        let xs = [
            Point::new(vec![0.5, 0.2, 0.3]),
            Point::new(vec![0.4, 0.3, 0.3]),
            Point::new(vec![0.35, 0.3, 0.35]),
        ];
        let mut prev = xs[0].clone();
        for (t, x) in xs.iter().enumerate() {
            let (est, _, _) =
                estimate_gradient(&mut state, &oracle, x, &prev, t as u64, &mut rng).unwrap();
            assert_eq!(est, f.gradient(x), "t = {t}");
            prev = x.clone();
        }
    }

    #[test]
    fn svrf_checkpoint_returns_the_exact_gradient() {
        let f = DiagQuadratic::norm_sq(2);
        let oracle = GaussianNoiseOracle::new(&f, 0.7, 2);
        let mut state = EstimatorState::svrf();
        let x = Point::new(vec![0.6, 0.4]);
        let mut rng = stream_rng(9, 0);
        // t = 0 is a checkpoint (s_0 = 0)
        let (est, sfo, foo) =
            estimate_gradient(&mut state, &oracle, &x, &x, 0, &mut rng).unwrap();
        assert_eq!(est, f.gradient(&x));
        assert_eq!((sfo, foo), (0, 1));
    }

    #[test]
    fn one_sample_with_rho_one_is_the_plain_sample() {
        let f = DiagQuadratic::norm_sq(2);
        let oracle = GaussianNoiseOracle::new(&f, 0.0, 2);
        let mut state =
            EstimatorState::OneSample { rho: RhoSchedule::Constant(1.0), estimate: None };
        let x = Point::new(vec![0.3, 0.7]);
        let mut rng = stream_rng(11, 4);
        let (est, used, _) = estimate_gradient(&mut state, &oracle, &x, &x, 4, &mut rng).unwrap();
        assert_eq!(est, f.gradient(&x));
        assert_eq!(used, 1);
    }

    #[test]
    fn checkpoint_schedule_is_2k_minus_1() {
        let cps: Vec<u64> = (0..20).filter(|&t| is_checkpoint(t)).collect();
        assert_eq!(cps, vec![0, 1, 3, 7, 15]);
    }

    #[test]
    fn batch_mean_is_unbiased_empirically() {
        let f = DiagQuadratic::norm_sq(2);
        let sigma = 1.0;
        let oracle = GaussianNoiseOracle::new(&f, sigma, 2);
        let x = Point::new(vec![0.25, 0.5]);
        let mut state = EstimatorState::batch_mean(BatchSchedule::Constant(1));
        let n = 10_000usize;
        let mut mean = Point::zeros(2);
        for i in 0..n {
            let mut rng = stream_rng(77, i as u64);
            let (est, _, _) =
                estimate_gradient(&mut state, &oracle, &x, &x, i as u64, &mut rng).unwrap();
            mean.add_scaled(1.0 / n as f64, &est);
        }
        let exact = f.gradient(&x);
        let tol = 5.0 * sigma / (n as f64).sqrt();
        for (m, e) in mean.coords().iter().zip(exact.coords()) {
            assert!((m - e).abs() <= tol);
        }
    }
}
