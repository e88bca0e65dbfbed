//! Conditional gradient sliding: accelerated outer updates with inexact
//! projections computed by an inner Frank-Wolfe loop.

use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::point::Point;
use crate::region::FeasibleRegion;
use crate::run::{Recorder, RunConfig, RunResult, StepStats, StopReason};
use crate::trace::Counters;

const MAX_INNER: usize = 1_000_000;

/// Parameter schedules for the sliding runner.
#[derive(Debug, Clone)]
pub struct CgsSchedule {
    pub l: f64,
    pub diameter: f64,
    /// Fixed horizon variant: `gamma = 2/(t+2)`, `eta = 2L/(t+1)`,
    /// `beta = 2 L D0^2/(T (t+1))` with `D0 <= D`.
    pub fixed_horizon: Option<u64>,
    /// Stochastic-sliding learning rate `eta = 4L/(t+3)` instead of the
    /// deterministic `3L/(t+2)`.
    pub stochastic_eta: bool,
}

impl CgsSchedule {
    /// Default schedule: `gamma = 3/(t+3)`, `eta = 3L/(t+2)`,
    /// `beta = L D^2 / ((t+1)(t+2))`.
    pub fn standard(l: f64, diameter: f64) -> Self {
        CgsSchedule { l, diameter, fixed_horizon: None, stochastic_eta: false }
    }

    /// Published stochastic-sliding schedule: `gamma = 3/(t+3)`,
    /// `eta = 4L/(t+3)`, `beta = L D^2/((t+1)(t+2))`.
    pub fn stochastic(l: f64, diameter: f64) -> Self {
        CgsSchedule { l, diameter, fixed_horizon: None, stochastic_eta: true }
    }

    pub fn gamma(&self, t: u64) -> f64 {
        match self.fixed_horizon {
            None => 3.0 / (t + 3) as f64,
            Some(_) => 2.0 / (t + 2) as f64,
        }
    }

    pub fn eta(&self, t: u64) -> f64 {
        if self.stochastic_eta {
            return 4.0 * self.l / (t + 3) as f64;
        }
        match self.fixed_horizon {
            None => 3.0 * self.l / (t + 2) as f64,
            Some(_) => 2.0 * self.l / (t + 1) as f64,
        }
    }

    pub fn beta(&self, t: u64) -> f64 {
        let dsq = self.diameter * self.diameter;
        match self.fixed_horizon {
            None => self.l * dsq / ((t + 1) as f64 * (t + 2) as f64),
            Some(h) => 2.0 * self.l * dsq / (h as f64 * (t + 1) as f64),
        }
    }
}

/// Inner conditional-gradient "projection": Frank-Wolfe with short steps on
/// the prox objective `<g0, u> + eta ||u - u0||^2 / 2`, returning the first
/// iterate whose inner Frank-Wolfe gap is at most `beta`.
///
/// Returns the point and the number of LMO calls spent.
pub fn cg_projection(
    g0: &Point,
    u0: &Point,
    eta: f64,
    beta: f64,
    region: &FeasibleRegion,
) -> Result<(Point, u64)> {
    if eta <= 0.0 {
        return Err(Error::ContractViolation("cg projection requires eta > 0".into()));
    }
    if beta < 0.0 {
        return Err(Error::ContractViolation("cg projection requires beta >= 0".into()));
    }
    let mut u = u0.clone();
    let mut g = g0.clone(); // gradient of the prox objective at u0
    let mut lmo_calls = 0u64;
    for _ in 0..MAX_INNER {
        let v = region.lmo(&g)?;
        lmo_calls += 1;
        let d = u.sub(&v);
        let gap = g.dot(&d);
        if gap <= beta {
            return Ok((u, lmo_calls));
        }
        let alpha = (gap / (eta * d.norm_sq())).min(1.0);
        u = u.convex_step(alpha, &v);
        // g = g0 + eta (u - u0)
        g = g0.clone();
        g.add_scaled(eta, &u.sub(u0));
    }
    Err(Error::NumericFailure(
        "cg projection exceeded the inner iteration budget".into(),
    ))
}

/// Conditional gradient sliding. The three-sequence update
/// `w = (1-gamma) y + gamma x; x <- CG(grad f(w), x, eta, beta);
/// y <- y + gamma (x - y)` runs until the iteration budget or, when the
/// objective declares its optimum, until the primal gap of `y` reaches
/// `config.tol`. Trace rows describe the output sequence `y_t`; the
/// Frank-Wolfe gap column is NaN (computing it would spend extra oracle
/// calls and distort the oracle economy this runner exists for).
pub fn run_cgs(
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
    schedule: &CgsSchedule,
) -> Result<RunResult> {
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
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let stats = StepStats::default();
    let mut x = x0.clone();
    let mut y = x0;
    let mut stop = StopReason::MaxIters;
    let mut iterations = 0;

    for t in 0..config.max_iters {
        rec.observe(&y);
        let fy = objective.value(&y);
        if let Some(f_star) = objective.optimum_value() {
            if fy - f_star <= config.tol {
                rec.record(t, fy, f64::NAN, 0.0, counters, 0, true);
                stop = StopReason::Converged;
                iterations = t;
                break;
            }
        }
        let gamma = schedule.gamma(t);
        let w = y.convex_step(gamma, &x);
        let grad_w = objective.gradient(&w);
        counters.foo_calls += 1;
        let (x_next, inner_lmo) =
            cg_projection(&grad_w, &x, schedule.eta(t), schedule.beta(t), region)?;
        counters.lmo_calls += inner_lmo;
        x = x_next;
        y = y.convex_step(gamma, &x);
        rec.record(t, fy, f64::NAN, gamma, counters, 0, t + 1 == config.max_iters);
        iterations = t + 1;
    }
    if stop == StopReason::MaxIters {
        rec.observe(&y);
    }
    let f_final = objective.value(&y);
    Ok(rec.finish(y, f_final, stop, iterations, counters, stats, None))
}

/// Restart wrapper for strongly convex objectives: stages of
/// `T = ceil(2 sqrt(6 L / mu))` fixed-horizon iterations with the accuracy
/// schedule halved between stages
/// (`beta_t = 8 L phi0 2^{-s} / (mu T (t+1))`).
pub fn run_cgs_restart(
    objective: &dyn Objective,
    region: &FeasibleRegion,
    config: &RunConfig,
    l: f64,
    mu: f64,
    phi0: f64,
    stages: u64,
) -> Result<RunResult> {
    if l <= 0.0 || mu <= 0.0 || phi0 <= 0.0 {
        return Err(Error::ContractViolation("restart requires L, mu, phi0 > 0".into()));
    }
    let t_horizon = (2.0 * (6.0 * l / mu).sqrt()).ceil() as u64;
    let mut counters = Counters::default();
    let mut w = match &config.start {
        crate::run::StartPoint::Given(p) => p.clone(),
        crate::run::StartPoint::LmoFromFeasible => {
            let p = region.feasible_point();
            counters.foo_calls += 1;
            counters.lmo_calls += 1;
            region.lmo(&objective.gradient(&p))?
        }
    };
    let mut rec = Recorder::new(objective, config.keep_iterates, config.record_every);
    let stats = StepStats::default();
    let mut stop = StopReason::MaxIters;
    let mut total_t = 0u64;

    'outer: for s in 0..stages {
        let mut x = w.clone();
        let mut y = w.clone();
        let scale = 8.0 * l * phi0 * 0.5f64.powi(s as i32) / (mu * t_horizon as f64);
        for t in 0..t_horizon {
            rec.observe(&y);
            let fy = objective.value(&y);
            if let Some(f_star) = objective.optimum_value() {
                if fy - f_star <= config.tol {
                    rec.record(total_t, fy, f64::NAN, 0.0, counters, 0, true);
                    stop = StopReason::Converged;
                    w = y;
                    break 'outer;
                }
            }
            let gamma = 2.0 / (t + 2) as f64;
            let eta = 2.0 * l / (t + 1) as f64;
            let beta = scale / (t + 1) as f64;
            let wt = y.convex_step(gamma, &x);
            let grad = objective.gradient(&wt);
            counters.foo_calls += 1;
            let (x_next, inner_lmo) = cg_projection(&grad, &x, eta, beta, region)?;
            counters.lmo_calls += inner_lmo;
            x = x_next;
            y = y.convex_step(gamma, &x);
            rec.record(total_t, fy, f64::NAN, gamma, counters, 0, false);
            total_t += 1;
        }
        w = y;
    }
    let f_final = objective.value(&w);
    Ok(rec.finish(w, f_final, stop, total_t, counters, stats, None))
}


#[cfg(test)]
mod restart_tests {
    use super::*;
    use crate::objectives::DiagQuadratic;
    use crate::run::{RunConfig, StartPoint, StopReason};
    use crate::point::Point;

    #[test]
    fn restart_wrapper_halves_the_gap_per_stage() {
        // strongly convex quadratic with interior optimum on the interval
        let f = DiagQuadratic::new(vec![1.0], vec![0.25]).with_optimum(0.0);
        let region = FeasibleRegion::Box { lower: vec![-1.0], upper: vec![1.0] };
        let config = RunConfig {
            max_iters: 10_000,
            tol: 1e-9,
            start: StartPoint::Given(Point::new(vec![1.0])),
            ..Default::default()
        };
        let phi0 = f.value(&Point::new(vec![1.0]));
        let res = run_cgs_restart(&f, &region, &config, 2.0, 2.0, phi0, 40).unwrap();
        assert_eq!(res.stop, StopReason::Converged);
        assert!(res.f_value <= 1e-9);
    }
}
