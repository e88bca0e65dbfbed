//! Hybrid conditional gradient-smoothing for composite objectives
//! `h(x) + g(Ax)` with nonsmooth but prox-friendly `g`.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

/// A nonsmooth convex part with an exact proximal map.
#[derive(Debug, Clone)]
pub enum NonsmoothPart {
    /// `g(z) = sum_i |z_i - c_i|`; prox is soft-thresholding around `c`.
    L1Offset { center: Vec<f64> },
    /// `g(z) = sum_i max(0, z_i)`; prox clips the positive part.
    MaxZero,
}

impl NonsmoothPart {
    pub fn eval(&self, z: &Point) -> f64 {
        match self {
            NonsmoothPart::L1Offset { center } => z
                .coords()
                .iter()
                .zip(center)
                .map(|(&zi, &ci)| (zi - ci).abs())
                .sum(),
            NonsmoothPart::MaxZero => z.coords().iter().map(|&zi| zi.max(0.0)).sum(),
        }
    }

    /// `prox_{beta g}(z) = argmin_u g(u) + ||u - z||^2 / (2 beta)`.
    pub fn prox(&self, z: &Point, beta: f64) -> Point {
        match self {
            NonsmoothPart::L1Offset { center } => Point::new(
                z.coords()
                    .iter()
                    .zip(center)
                    .map(|(&zi, &ci)| {
                        let d = zi - ci;
                        ci + (d.abs() - beta).max(0.0) * d.signum()
                    })
                    .collect(),
            ),
            NonsmoothPart::MaxZero => Point::new(
                z.coords()
                    .iter()
                    .map(|&zi| {
                        if zi > beta {
                            zi - beta
                        } else if zi > 0.0 {
                            0.0
                        } else {
                            zi
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Lipschitz constant of `g` (per coordinate sum structure: sqrt(dim)
    /// would be tighter in l2; the conservative declared constant is used
    /// in the smoothing error bound only).
    pub fn lipschitz(&self, dim: usize) -> f64 {
        match self {
            NonsmoothPart::L1Offset { .. } | NonsmoothPart::MaxZero => (dim as f64).sqrt(),
        }
    }
}

/// The linear map `A` in `h(x) + g(Ax)`.
#[derive(Debug, Clone)]
pub enum LinearMap {
    Identity,
    /// Row-major `m x n`.
    Dense(Vec<Vec<f64>>),
}

impl LinearMap {
    pub fn apply(&self, x: &Point) -> Point {
        match self {
            LinearMap::Identity => x.clone(),
            LinearMap::Dense(rows) => Point::new(
                rows.iter()
                    .map(|r| r.iter().zip(x.coords()).map(|(a, b)| a * b).sum())
                    .collect(),
            ),
        }
    }

    pub fn apply_transpose(&self, y: &Point) -> Point {
        match self {
            LinearMap::Identity => y.clone(),
            LinearMap::Dense(rows) => {
                let n = rows[0].len();
                let mut out = vec![0.0; n];
                for (r, &yi) in rows.iter().zip(y.coords()) {
                    for (o, &a) in out.iter_mut().zip(r) {
                        *o += a * yi;
                    }
                }
                Point::new(out)
            }
        }
    }
}

/// The composite problem `min h(x) + g(Ax)`.
pub struct SmoothedProblem<'a> {
    pub smooth: Option<&'a dyn Objective>,
    pub nonsmooth: NonsmoothPart,
    pub map: LinearMap,
}

impl SmoothedProblem<'_> {
    /// True (unsmoothed) composite value.
    pub fn value(&self, x: &Point) -> f64 {
        let hx = self.smooth.map_or(0.0, |h| h.value(x));
        hx + self.nonsmooth.eval(&self.map.apply(x))
    }

    /// Gradient of the smoothed surrogate `h + g_beta o A`:
    /// `grad h(x) + A^T (Ax - prox_{beta g}(Ax)) / beta`.
    pub fn smoothed_gradient(&self, x: &Point, beta: f64) -> Point {
        let ax = self.map.apply(x);
        let p = self.nonsmooth.prox(&ax, beta);
        let mut residual = ax;
        residual.add_scaled(-1.0, &p);
        let mut z = self.map.apply_transpose(&residual).scale(1.0 / beta);
        if let Some(h) = self.smooth {
            z = z.add(&h.gradient(x));
        }
        z.with_shape(x.shape())
    }
}

/// Hybrid conditional gradient-smoothing: vanilla Frank-Wolfe on the
/// Moreau-smoothed surrogate with `beta_t = beta / sqrt(t+1)` and
/// `gamma_t = 2/(t+2)`. Trace rows carry the true composite value; the gap
/// column is NaN (the objective is nonsmooth).
pub fn run_hcgs(
    problem: &SmoothedProblem<'_>,
    region: &FeasibleRegion,
    config: &RunConfig,
    beta: f64,
) -> Result<RunResult> {
    if beta <= 0.0 {
        return Err(Error::ContractViolation("smoothing beta must be > 0".into()));
    }
    let mut counters = Counters::default();
    let mut x = match &config.start {
        crate::run::StartPoint::Given(p) => p.clone(),
        crate::run::StartPoint::LmoFromFeasible => {
            let p = region.feasible_point();
            counters.foo_calls += 1;
            counters.lmo_calls += 1;
            region.lmo(&problem.smoothed_gradient(&p, beta))?
        }
    };
    let mut rec = RecorderShim::new(config);
    let mut stats = StepStats::default();
    let mut iterations = 0;

    for t in 0..config.max_iters {
        rec.observe(&x, config);
        let fx = problem.value(&x);
        let beta_t = beta / ((t + 1) as f64).sqrt();
        let z = problem.smoothed_gradient(&x, beta_t);
        counters.foo_calls += 1;
        let v = region.lmo(&z)?;
        counters.lmo_calls += 1;
        let gamma = 2.0 / (t + 2) as f64;
        rec.record(t, fx, gamma, counters, t + 1 == config.max_iters);
        stats.fw_steps += 1;
        x = x.convex_step(gamma, &v);
        iterations = t + 1;
    }
    rec.observe(&x, config);
    let f_final = problem.value(&x);
    Ok(rec.finish(x, f_final, iterations, counters, stats))
}

/// The composite problem is not an `Objective` (no gradient), so the shared
/// recorder does not apply; this shim keeps the same trace format.
struct RecorderShim {
    inner: Recorder,
}

impl RecorderShim {
    fn new(config: &RunConfig) -> Self {
        struct Dummy;
        impl Objective for Dummy {
            fn value(&self, _: &Point) -> f64 {
                0.0
            }
            fn gradient(&self, x: &Point) -> Point {
                Point::zeros(x.dim())
            }
        }
        RecorderShim { inner: Recorder::new(&Dummy, config.keep_iterates, config.record_every) }
    }

    fn observe(&mut self, x: &Point, _config: &RunConfig) {
        self.inner.observe(x);
    }

    fn record(&mut self, t: u64, fx: f64, gamma: f64, counters: Counters, force: bool) {
        self.inner.record(t, fx, f64::NAN, gamma, counters, 0, force);
    }

    fn finish(
        self,
        x: Point,
        f_value: f64,
        iterations: u64,
        counters: Counters,
        stats: StepStats,
    ) -> RunResult {
        self.inner.finish(x, f_value, StopReason::MaxIters, iterations, counters, stats, None)
    }
}
