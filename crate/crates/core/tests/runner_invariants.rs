//! Cross-runner invariants: feasibility of recorded iterates, gap
//! dominance, monotonicity, and the inexact-oracle robustness bound.

use condgrad::algorithms::{run_afw, run_bcg, run_fw, run_pfw};
use condgrad::error::Result;
use condgrad::gap::fw_gap;
use condgrad::objective::Objective;
use condgrad::objectives::DiagQuadratic;
use condgrad::point::Point;
use condgrad::region::{FeasibleRegion, LinearOracle};
use condgrad::run::{RunConfig, StartPoint};
use condgrad::step::StepRule;

fn instance(n: usize) -> (DiagQuadratic, FeasibleRegion) {
    let weights: Vec<f64> = (0..n).map(|i| 0.5 + (i % 4) as f64 * 0.4).collect();
    let center: Vec<f64> = (0..n).map(|i| ((i * 7) % 13) as f64 / 13.0 - 0.2).collect();
    (DiagQuadratic::new(weights, center), FeasibleRegion::Simplex { n })
}

#[test]
fn every_recorded_iterate_stays_feasible() {
    let (f, region) = instance(12);
    let config = RunConfig {
        max_iters: 200,
        tol: 1e-10,
        step_rule: StepRule::LineSearch,
        keep_iterates: true,
        ..Default::default()
    };
    for res in [
        run_fw(&f, &region, &config).unwrap(),
        run_afw(&f, &region, &config).unwrap(),
        run_pfw(&f, &region, &config).unwrap(),
        run_bcg(&f, &region, &config, 1.0).unwrap(),
    ] {
        for x in res.iterates.as_ref().unwrap() {
            assert!(region.contains(x, 1e-9), "iterate left the region");
        }
    }
}

#[test]
fn ball_iterates_violate_constraints_by_at_most_1e9() {
    let n = 10;
    let f = DiagQuadratic::new(vec![1.0; n], vec![0.3; n]);
    for region in [
        FeasibleRegion::L1Ball { n, tau: 1.0 },
        FeasibleRegion::LpBall { n, tau: 1.0, p: 3.0 },
    ] {
        let config = RunConfig {
            max_iters: 150,
            tol: 1e-10,
            step_rule: StepRule::LineSearch,
            keep_iterates: true,
            ..Default::default()
        };
        let res = run_fw(&f, &region, &config).unwrap();
        for x in res.iterates.as_ref().unwrap() {
            assert!(region.contains(x, 1e-9));
        }
    }
}

#[test]
fn primal_gap_never_exceeds_fw_gap_when_optimum_known() {
    let n = 10;
    // interior optimum: f* = 0 declared
    let mut c: Vec<f64> = (0..n).map(|i| 0.4 + ((i * 3) % 7) as f64).collect();
    let s: f64 = c.iter().sum();
    c.iter_mut().for_each(|v| *v /= s);
    let f = DiagQuadratic::new(vec![1.0; n], c).with_optimum(0.0);
    let region = FeasibleRegion::Simplex { n };
    let config = RunConfig {
        max_iters: 300,
        tol: 0.0,
        step_rule: StepRule::Short,
        record_every: 1,
        ..Default::default()
    };
    let res = run_fw(&f, &region, &config).unwrap();
    for row in &res.trace.rows {
        assert!(
            row.primal_gap <= row.fw_gap + 1e-12,
            "t={}: primal {} > gap {}",
            row.t,
            row.primal_gap,
            row.fw_gap
        );
    }
}

#[test]
fn monotone_objective_under_short_step_and_line_search() {
    let (f, region) = instance(15);
    for rule in [StepRule::Short, StepRule::LineSearch] {
        let config = RunConfig {
            max_iters: 300,
            tol: 1e-12,
            step_rule: rule.clone(),
            record_every: 1,
            ..Default::default()
        };
        for res in [
            run_fw(&f, &region, &config).unwrap(),
            run_afw(&f, &region, &config).unwrap(),
            run_pfw(&f, &region, &config).unwrap(),
        ] {
            let vals: Vec<f64> = res.trace.rows.iter().map(|r| r.f_value).collect();
            assert!(
                vals.windows(2).all(|w| w[1] <= w[0] + 1e-12),
                "objective increased under {rule:?}"
            );
        }
    }
}

/// Oracle wrapper injecting a diminishing additive error: at call `t` it
/// returns the worst enumerated vertex still within `2 L D^2 delta/(t+3)`
/// of the true minimum.
struct InexactOracle<'a> {
    region: &'a FeasibleRegion,
    vertices: Vec<Point>,
    budget: Box<dyn Fn(u64) -> f64 + 'a>,
    calls: std::cell::Cell<u64>,
}

impl LinearOracle for InexactOracle<'_> {
    fn lmo(&self, c: &Point) -> Result<Point> {
        let t = self.calls.get();
        self.calls.set(t + 1);
        let exact = self
            .vertices
            .iter()
            .map(|v| c.dot(v))
            .fold(f64::INFINITY, f64::min);
        let budget = (self.budget)(t);
        // adversarial within budget: the worst admissible vertex
        let v = self
            .vertices
            .iter()
            .filter(|v| c.dot(v) <= exact + budget)
            .max_by(|a, b| c.dot(a).partial_cmp(&c.dot(b)).unwrap())
            .unwrap();
        Ok(v.clone())
    }
    fn diameter(&self) -> f64 {
        self.region.diameter()
    }
    fn feasible_point(&self) -> Point {
        self.region.feasible_point()
    }
}

#[test]
fn inexact_lmo_keeps_the_relaxed_rate_bound() {
    // additive LMO error 2 L D^2 delta/(t+3) keeps h_t <= 2 L D^2 (1+delta)/(t+3)
    let n = 8;
    let mut c: Vec<f64> = (0..n).map(|i| 0.3 + ((i * 5) % 11) as f64).collect();
    let s: f64 = c.iter().sum();
    c.iter_mut().for_each(|v| *v /= s);
    let f = DiagQuadratic::new(vec![1.0; n], c).with_optimum(0.0);
    let region = FeasibleRegion::Simplex { n };
    let l = f.smoothness().unwrap();
    let d_sq = 2.0;
    let delta = 0.5;
    let oracle = InexactOracle {
        region: &region,
        vertices: region.enumerate_vertices().unwrap(),
        budget: Box::new(move |t| 2.0 * l * d_sq * delta / (t + 3) as f64),
        calls: std::cell::Cell::new(0),
    };
    let config = RunConfig {
        max_iters: 400,
        tol: 0.0,
        step_rule: StepRule::OpenLoop { shift: 2 },
        start: StartPoint::Given(Point::unit(n, 0)),
        record_every: 1,
        ..Default::default()
    };
    let res = run_fw(&f, &oracle, &config).unwrap();
    for row in res.trace.rows.iter().filter(|r| r.t >= 1) {
        let bound = 2.0 * l * d_sq * (1.0 + delta) / (row.t + 3) as f64;
        assert!(
            row.primal_gap <= bound + 1e-12,
            "t={}: h={} > {}",
            row.t,
            row.primal_gap,
            bound
        );
    }
}

#[test]
fn fw_gap_zero_exactly_at_the_minimizer() {
    // brute force over a fine hull grid of the 3-simplex: gap == 0 iff
    // the point minimizes f over the region
    let f = DiagQuadratic::new(vec![1.0, 2.0, 0.7], vec![0.2, 0.1, 0.4]);
    let region = FeasibleRegion::Simplex { n: 3 };
    let steps = 60;
    let mut best = f64::INFINITY;
    let mut grid = Vec::new();
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            let a = i as f64 / steps as f64;
            let b = j as f64 / steps as f64;
            let p = Point::new(vec![a, b, 1.0 - a - b]);
            let v = f.value(&p);
            grid.push((p, v));
            best = best.min(v);
        }
    }
    for (p, v) in &grid {
        let gap = fw_gap(&f, p, &region).unwrap().fw_gap;
        assert!(gap >= -1e-12, "negative gap");
        if gap <= 1e-9 {
            // near-zero gap must mean near-minimal value
            assert!(v - best <= 1e-3, "gap ~ 0 at a non-minimizer");
        }
        if v - best > 1e-2 {
            assert!(gap > 1e-9, "clearly suboptimal point with zero gap");
        }
    }
}
