//! The built-in experiment catalog.

use condgrad::algorithms::{
    run_afw, run_bcg, run_cgs, run_dipfw, run_fw, run_lazy, run_nepfw, run_pfw, CgsSchedule,
    DipfwStepMode, LazyVariant,
};
use condgrad::apps::{approx_caratheodory, dopt_design, meb_coreset, DoptVariant};
use condgrad::error::{Error, Result};
use condgrad::objective::Objective;
use condgrad::objectives::DiagQuadratic;
use condgrad::point::Point;
use condgrad::region::FeasibleRegion;
use condgrad::run::{RunConfig, RunResult, StartPoint};
use condgrad::step::{AdaptiveState, StepRule};
use condgrad::stochastic::{
    run_stochastic_fw, EstimatorState, GammaSchedule, GaussianNoiseOracle,
};
use condgrad::trace::{format_float, RunTrace};

use crate::config::ExperimentConfig;
use crate::instances;

/// One experiment's output: labelled traces plus a key-value summary.
pub struct ExperimentOutput {
    pub name: String,
    pub traces: Vec<(String, RunTrace)>,
    pub summary: Vec<(String, String)>,
    /// The fully resolved configuration for archiving.
    pub resolved: ExperimentConfig,
}

pub const CATALOG: &[(&str, &str)] = &[
    ("scalar-quadratic", "1-D quadratic on [-1,1]: open-loop zigzag vs short step vs line search"),
    ("lower-bound-simplex", "||x||^2 over the simplex: primal gap against the 1/(t+1) - 1/n sparsity bound"),
    ("zigzag-triangle", "triangle instance comparing vanilla, away-step, pairwise and fully-corrective runners"),
    ("stepsize-comparison-l2", "conditioned quadratic over the l2 ball under the four step rules"),
    ("stepsize-comparison-l1", "conditioned quadratic over the l1 ball under the four step rules"),
    ("birkhoff-quadratic", "pairwise vs decomposition-invariant pairwise on the Birkhoff polytope"),
    ("lazy-spectrahedron", "nuclear-norm ball quadratic: lazy variants vs their exact-oracle counterparts"),
    ("nep-hypercube", "nearest-extreme-point oracle vs plain LMO on the 0/1 hypercube"),
    ("nep-simplex", "nearest-extreme-point oracle vs plain LMO on the simplex"),
    ("cgs-vs-fw", "sliding vs vanilla: gradient-call economy at equal accuracy"),
    ("bcg-vs-afw", "blended conditional gradient vs away-step on a face-optimum quadratic"),
    ("stochastic-quadratic", "noisy quadratic over the simplex: the five gradient estimators across seeds"),
    ("caratheodory-birkhoff", "sparse convex decomposition of a doubly stochastic matrix"),
    ("meb-random", "minimum enclosing ball of a random 3-D cloud via the dual coreset solver"),
    ("dopt-gaussian", "D-optimal design on Gaussian measurement vectors with rank-1 updates"),
];

pub fn nearest_matches(name: &str) -> Vec<&'static str> {
    let mut scored: Vec<(usize, &str)> = CATALOG
        .iter()
        .map(|(n, _)| (levenshtein(name, n), *n))
        .collect();
    scored.sort();
    scored.into_iter().take(3).map(|(_, n)| n).collect()
}

fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut cur = vec![i + 1];
        for (j, cb) in b.iter().enumerate() {
            let cost = if ca == cb { 0 } else { 1 };
            cur.push((prev[j] + cost).min(prev[j + 1] + 1).min(cur[j] + 1));
        }
        prev = cur;
    }
    prev[b.len()]
}

struct Ctx {
    seed: u64,
    max_iters: Option<u64>,
    tol: Option<f64>,
}

impl Ctx {
    fn from(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Ctx {
            seed: cfg.get_u64("run.seed")?.unwrap_or(0),
            max_iters: cfg.get_u64("run.max_iters")?,
            tol: cfg.get_f64("run.tol")?,
        })
    }

    fn config(&self, max_iters: u64, tol: f64) -> RunConfig {
        RunConfig {
            max_iters: self.max_iters.unwrap_or(max_iters),
            tol: self.tol.unwrap_or(tol),
            seed: self.seed,
            ..Default::default()
        }
    }
}

fn push_run(out: &mut ExperimentOutput, label: &str, res: &RunResult) {
    out.traces.push((label.to_string(), res.trace.clone()));
    out.summary.push((format!("{label}.f_final"), format_float(res.f_value)));
    out.summary.push((format!("{label}.iterations"), res.iterations.to_string()));
    out.summary.push((format!("{label}.lmo_calls"), res.counters.lmo_calls.to_string()));
    out.summary.push((format!("{label}.foo_calls"), res.counters.foo_calls.to_string()));
    out.summary.push((format!("{label}.sfo_calls"), res.counters.sfo_calls.to_string()));
    out.summary.push((format!("{label}.stop"), format!("{:?}", res.stop)));
}

/// Run a named built-in experiment (with `run.*` overrides from `cfg`), or
/// an inline problem spec (`objective.kind` + `region.kind` +
/// `algorithm.name` + `step.rule`) when no experiment is named.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    if cfg.experiment.is_none() {
        return inline::run(cfg);
    }
    let name = cfg
        .experiment
        .as_deref()
        .ok_or_else(|| Error::Config("no experiment named (set `experiment = <name>`)".into()))?;
    if !CATALOG.iter().any(|(n, _)| *n == name) {
        return Err(Error::Config(format!(
            "unknown experiment `{name}`; nearest matches: {}",
            nearest_matches(name).join(", ")
        )));
    }
    let ctx = Ctx::from(cfg)?;
    let mut out = ExperimentOutput {
        name: name.to_string(),
        traces: Vec::new(),
        summary: Vec::new(),
        resolved: cfg.clone(),
    };
    out.resolved.experiment = Some(name.to_string());
    out.resolved.set("run.seed", ctx.seed);

    match name {
        "scalar-quadratic" => scalar_quadratic(&ctx, &mut out)?,
        "lower-bound-simplex" => lower_bound_simplex(cfg, &ctx, &mut out)?,
        "zigzag-triangle" => zigzag_triangle(&ctx, &mut out)?,
        "stepsize-comparison-l2" => stepsize_comparison(&ctx, &mut out, 2.0)?,
        "stepsize-comparison-l1" => stepsize_comparison(&ctx, &mut out, 1.0)?,
        "birkhoff-quadratic" => birkhoff_quadratic(&ctx, &mut out)?,
        "lazy-spectrahedron" => lazy_spectrahedron(&ctx, &mut out)?,
        "nep-hypercube" => nep_comparison(&ctx, &mut out, false)?,
        "nep-simplex" => nep_comparison(&ctx, &mut out, true)?,
        "cgs-vs-fw" => cgs_vs_fw(&ctx, &mut out)?,
        "bcg-vs-afw" => bcg_vs_afw(&ctx, &mut out)?,
        "stochastic-quadratic" => stochastic_quadratic(cfg, &ctx, &mut out)?,
        "caratheodory-birkhoff" => caratheodory_birkhoff(&ctx, &mut out)?,
        "meb-random" => meb_random(cfg, &ctx, &mut out)?,
        "dopt-gaussian" => dopt_gaussian(&ctx, &mut out)?,
        _ => unreachable!(),
    }
    Ok(out)
}

fn scalar_quadratic(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let f = DiagQuadratic::norm_sq(1).with_optimum(0.0);
    let region = FeasibleRegion::Box { lower: vec![-1.0], upper: vec![1.0] };
    let start = StartPoint::Given(Point::new(vec![1.0]));

    let base = ctx.config(100, 0.0);
    let open = RunConfig {
        step_rule: StepRule::OpenLoop { shift: 2 },
        start: start.clone(),
        ..base.clone()
    };
    push_run(out, "fw-open-loop", &run_fw(&f, &region, &open)?);

    // loose smoothness estimate L = 4 gives the geometric decay (1 - 2/L)^t
    struct LooseL(DiagQuadratic);
    impl Objective for LooseL {
        fn value(&self, x: &Point) -> f64 {
            self.0.value(x)
        }
        fn gradient(&self, x: &Point) -> Point {
            self.0.gradient(x)
        }
        fn smoothness(&self) -> Option<f64> {
            Some(4.0)
        }
        fn optimum_value(&self) -> Option<f64> {
            Some(0.0)
        }
    }
    let short = RunConfig { step_rule: StepRule::Short, start: start.clone(), ..base.clone() };
    push_run(out, "fw-short-loose-l", &run_fw(&LooseL(DiagQuadratic::norm_sq(1)), &region, &short)?);

    let ls = RunConfig { step_rule: StepRule::LineSearch, start, tol: 1e-14, ..base };
    push_run(out, "fw-line-search", &run_fw(&f, &region, &ls)?);
    Ok(())
}

fn lower_bound_simplex(
    cfg: &ExperimentConfig,
    ctx: &Ctx,
    out: &mut ExperimentOutput,
) -> Result<()> {
    let n = cfg.get_u64("region.n")?.unwrap_or(1000) as usize;
    out.resolved.set("region.n", n);
    let f = DiagQuadratic::norm_sq(n).with_optimum(1.0 / n as f64);
    let region = FeasibleRegion::Simplex { n };
    let base = RunConfig {
        step_rule: StepRule::LineSearch,
        start: StartPoint::Given(Point::unit(n, 0)),
        ..ctx.config(300, 1e-12)
    };
    let mut total_violations = 0u64;
    for (label, res) in [
        ("fw", run_fw(&f, &region, &base)?),
        ("afw", run_afw(&f, &region, &base)?),
        ("pfw", run_pfw(&f, &region, &base)?),
    ] {
        // any LMO-only method obeys the sparsity lower bound 1/(t+1) - 1/n
        let violations = res
            .trace
            .rows
            .iter()
            .filter(|r| (r.t as usize) < n)
            .filter(|r| r.primal_gap < 1.0 / (r.t + 1) as f64 - 1.0 / n as f64 - 1e-12)
            .count() as u64;
        total_violations += violations;
        out.summary.push((format!("{label}.lower_bound_violations"), violations.to_string()));
        push_run(out, label, &res);
    }
    out.summary.push(("lower_bound_violations_total".into(), total_violations.to_string()));
    Ok(())
}

fn zigzag_triangle(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let (f, region) = instances::triangle();
    let base = RunConfig {
        step_rule: StepRule::LineSearch,
        start: StartPoint::Given(Point::new(vec![0.0, 1.0])),
        ..ctx.config(60, 1e-12)
    };
    push_run(out, "fw", &run_fw(&f, &region, &base)?);
    push_run(out, "afw", &run_afw(&f, &region, &base)?);
    push_run(out, "pfw", &run_pfw(&f, &region, &base)?);
    push_run(out, "fcfw", &condgrad::algorithms::run_fcfw(&f, &region, &base)?);
    Ok(())
}

fn stepsize_comparison(ctx: &Ctx, out: &mut ExperimentOutput, p: f64) -> Result<()> {
    let n = 30;
    // log-spaced curvatures: strongly convex, smooth, condition ~ 100
    let l: Vec<f64> = (0..n)
        .map(|i| 0.5 * 100f64.powf(i as f64 / (n - 1) as f64))
        .collect();
    let mut r = instances::rng(ctx.seed, 10);
    let c: Vec<f64> = (0..n).map(|_| instances::uniform(&mut r, -0.3, 0.3)).collect();
    let f = DiagQuadratic::new(l, c);
    let region = if p == 1.0 {
        FeasibleRegion::L1Ball { n, tau: 1.0 }
    } else {
        FeasibleRegion::LpBall { n, tau: 1.0, p }
    };
    let base = ctx.config(500, 1e-10);
    // initial smoothness estimate from the small-step gradient heuristic
    let x0 = region.lmo(&f.gradient(&region.feasible_point()))?;
    let v0 = region.lmo(&f.gradient(&x0))?;
    let l0 = AdaptiveState::init_estimate(&f, &x0, &v0);
    out.summary.push(("adaptive.l_initial".into(), format_float(l0)));
    for (label, rule) in [
        ("open-loop", StepRule::OpenLoop { shift: 2 }),
        ("short", StepRule::Short),
        ("line-search", StepRule::LineSearch),
        ("adaptive", StepRule::Adaptive(AdaptiveState::with_l(l0))),
    ] {
        let cfg = RunConfig { step_rule: rule, ..base.clone() };
        push_run(out, label, &run_fw(&f, &region, &cfg)?);
    }
    Ok(())
}

fn birkhoff_quadratic(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let n = 8;
    let mut r = instances::rng(ctx.seed, 11);
    let dim = n * n;
    let l: Vec<f64> = (0..dim).map(|_| instances::uniform(&mut r, 0.5, 2.0)).collect();
    let c: Vec<f64> = (0..dim).map(|_| instances::uniform(&mut r, 0.0, 0.5)).collect();
    let f = DiagQuadratic::new(l, c);
    let region = FeasibleRegion::Birkhoff { n };
    let base = RunConfig { step_rule: StepRule::LineSearch, ..ctx.config(3000, 1e-8) };
    let pfw = run_pfw(&f, &region, &base)?;
    let dipfw = run_dipfw(&f, &region, &base, DipfwStepMode::LineSearch)?;
    out.summary.push((
        "pfw.active_set_atoms".into(),
        pfw.active_set.as_ref().map_or(0, |s| s.len()).to_string(),
    ));
    out.summary.push(("dipfw.active_set_bytes".into(), "0".into()));
    out.summary.push((
        "final_value_difference".into(),
        format_float((pfw.f_value - dipfw.f_value).abs()),
    ));
    push_run(out, "pfw", &pfw);
    push_run(out, "dipfw", &dipfw);
    Ok(())
}

fn lazy_spectrahedron(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let d = 8;
    let dim = d * d;
    let mut r = instances::rng(ctx.seed, 12);
    let l: Vec<f64> = (0..dim).map(|_| instances::uniform(&mut r, 0.5, 1.5)).collect();
    let c: Vec<f64> = (0..dim).map(|_| instances::uniform(&mut r, -0.05, 0.05)).collect();
    let f = DiagQuadratic::new(l, c);
    let region = FeasibleRegion::NuclearBall { rows: d, cols: d, tau: 1.0 };
    let base = RunConfig { step_rule: StepRule::LineSearch, ..ctx.config(800, 1e-5) };
    push_run(out, "fw", &run_fw(&f, &region, &base)?);
    push_run(out, "afw", &run_afw(&f, &region, &base)?);
    let lcg = run_lazy(LazyVariant::Fw, &f, &region, &base, 1.0, None)?;
    out.summary.push(("lcg.cache_hits".into(), lcg.stats.cache_hits.to_string()));
    push_run(out, "lcg", &lcg);
    let lafw = run_lazy(LazyVariant::Afw, &f, &region, &base, 1.0, None)?;
    out.summary.push(("lazy-afw.cache_hits".into(), lafw.stats.cache_hits.to_string()));
    push_run(out, "lazy-afw", &lafw);
    Ok(())
}

fn nep_comparison(ctx: &Ctx, out: &mut ExperimentOutput, on_simplex: bool) -> Result<()> {
    let inst = instances::nep_instance(32, on_simplex, ctx.seed);
    let base = RunConfig {
        step_rule: StepRule::OpenLoop { shift: 2 },
        start: StartPoint::Given(inst.start.clone()),
        ..ctx.config(200, 0.0)
    };
    let plain = run_fw(&inst.objective, &inst.region, &base)?;
    let nep = run_nepfw(&inst.objective, &inst.region, &base)?;
    out.summary.push(("fw.primal_gap_final".into(), format_float(plain.f_value)));
    out.summary.push(("nep.primal_gap_final".into(), format_float(nep.f_value)));
    push_run(out, "fw", &plain);
    push_run(out, "nep-fw", &nep);
    Ok(())
}

fn cgs_vs_fw(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let (f, region) = instances::interior_l1_quadratic(50, 1.0, ctx.seed);
    let l = f.smoothness().unwrap();
    let base = RunConfig { step_rule: StepRule::Short, ..ctx.config(20_000, 0.0) };
    let cfg_fw = RunConfig { tol: ctx.tol.unwrap_or(1e-3), ..base.clone() };
    // stop on the primal gap via the declared optimum for the sliding runner
    let cfg_cgs = RunConfig { tol: ctx.tol.unwrap_or(1e-3), max_iters: 2000, ..base };
    let schedule = CgsSchedule::standard(l, region.diameter());
    let fw = run_fw(&f, &region, &cfg_fw)?;
    let cgs = run_cgs(&f, &region, &cfg_cgs, &schedule)?;
    let target = 1e-3;
    let foo_at = |tr: &RunTrace| {
        tr.rows
            .iter()
            .find(|row| row.primal_gap.is_finite() && row.primal_gap <= target)
            .map(|row| row.foo_calls)
    };
    out.summary.push((
        "fw.foo_calls_to_1e-3".into(),
        foo_at(&fw.trace).map_or("unreached".into(), |v| v.to_string()),
    ));
    out.summary.push((
        "cgs.foo_calls_to_1e-3".into(),
        foo_at(&cgs.trace).map_or("unreached".into(), |v| v.to_string()),
    ));
    push_run(out, "fw", &fw);
    push_run(out, "cgs", &cgs);
    Ok(())
}

fn bcg_vs_afw(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let n = 50;
    let f = instances::face_quadratic(n, &[0.1, 0.1, 0.15, 0.15, 0.2, 0.3], ctx.seed);
    let region = FeasibleRegion::Simplex { n };
    let base = RunConfig { step_rule: StepRule::LineSearch, ..ctx.config(20_000, 1e-8) };
    let afw = run_afw(&f, &region, &base)?;
    let bcg = run_bcg(&f, &region, &base, 1.0)?;
    out.summary.push(("afw.lmo_calls".into(), afw.counters.lmo_calls.to_string()));
    out.summary.push(("bcg.lmo_calls".into(), bcg.counters.lmo_calls.to_string()));
    push_run(out, "afw", &afw);
    push_run(out, "bcg", &bcg);
    Ok(())
}

fn stochastic_quadratic(cfg: &ExperimentConfig, ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let n = 20;
    let f = instances::interior_simplex_quadratic(n, ctx.seed);
    let region = FeasibleRegion::Simplex { n };
    let sigma = 0.5;
    let l = f.smoothness().unwrap();
    let d = region.diameter();
    let oracle = GaussianNoiseOracle::new(&f, sigma, n);
    let seed_count = cfg.get_u64("run.seeds")?.unwrap_or(10).max(1);
    out.resolved.set("run.seeds", seed_count);
    let seeds: Vec<u64> = (0..seed_count).map(|k| ctx.seed.wrapping_add(k)).collect();
    let variants: Vec<(&str, u64, GammaSchedule)> = vec![
        ("sfw", 100, GammaSchedule::TwoOver { shift: 2 }),
        ("momentum", 4000, GammaSchedule::TwoOver { shift: 7 }),
        ("spider", 300, GammaSchedule::TwoOver { shift: 2 }),
        ("svrf", 150, GammaSchedule::TwoOver { shift: 2 }),
        ("one-sample", 10_000, GammaSchedule::OneOver { shift: 1 }),
    ];
    for (label, iters, gamma) in variants {
        let mut finals = Vec::new();
        let mut per_seed: Vec<condgrad::trace::RunTrace> = Vec::new();
        for &seed in &seeds {
            let mut est = match label {
                "sfw" => EstimatorState::batch_mean(
                    condgrad::stochastic::BatchSchedule::SfwQuadratic { alpha: 1.0 },
                ),
                "momentum" => EstimatorState::momentum(),
                "spider" => EstimatorState::spider(sigma * sigma * n as f64, l, d),
                "svrf" => EstimatorState::svrf(),
                _ => EstimatorState::one_sample(),
            };
            let run_cfg = RunConfig {
                max_iters: ctx.max_iters.unwrap_or(iters),
                tol: 0.0,
                seed,
                record_every: 10,
                ..Default::default()
            };
            let res = run_stochastic_fw(&mut est, &f, &oracle, &region, &run_cfg, gamma)?;
            finals.push(res.f_value);
            per_seed.push(res.trace.clone());
            push_run(out, &format!("{label}-s{seed}"), &res);
        }
        // median-aggregated trace: per recorded row, the across-seed median
        // of the value and primal-gap columns
        if let Some(first) = per_seed.first() {
            let mut agg = condgrad::trace::RunTrace::default();
            for (i, base_row) in first.rows.iter().enumerate() {
                if per_seed.iter().any(|tr| tr.rows.len() <= i) {
                    break;
                }
                let median_of = |pick: &dyn Fn(&condgrad::trace::TraceRow) -> f64| {
                    let mut vals: Vec<f64> =
                        per_seed.iter().map(|tr| pick(&tr.rows[i])).collect();
                    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    vals[vals.len() / 2]
                };
                let mut row = base_row.clone();
                row.f_value = median_of(&|r| r.f_value);
                row.primal_gap = median_of(&|r| r.primal_gap);
                row.fw_gap = median_of(&|r| r.fw_gap);
                agg.push(row);
            }
            out.traces.push((format!("{label}-median"), agg));
        }
        finals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = finals[finals.len() / 2];
        out.summary.push((format!("{label}.median_final_primal_gap"), format_float(median)));
    }
    Ok(())
}

fn caratheodory_birkhoff(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let (u, atoms) = instances::birkhoff_mixture(4, 5, ctx.seed);
    let region = FeasibleRegion::Birkhoff { n: 4 };
    let res = approx_caratheodory(&u, &region, 2.0, 0.05, ctx.max_iters.unwrap_or(20_000))?;
    out.summary.push(("mixture_atoms".into(), atoms.len().to_string()));
    out.summary.push(("atoms_used".into(), res.active.len().to_string()));
    out.summary.push(("iterations".into(), res.iterations.to_string()));
    out.summary.push(("residual_l2".into(), format_float(res.residual_norm)));
    out.summary.push(("reached".into(), res.reached.to_string()));
    Ok(())
}

fn meb_random(cfg: &ExperimentConfig, ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    // data.points: whitespace-separated numeric rows, one point per row
    let points = match cfg.get("data.points") {
        Some(path) => load_points(path)?,
        None => instances::random_points_3d(200, ctx.seed),
    };
    let res = meb_coreset(&points, ctx.tol.unwrap_or(1e-6), ctx.max_iters.unwrap_or(200_000))?;
    out.summary.push(("points".into(), points.len().to_string()));
    out.summary.push(("radius_sq".into(), format_float(res.radius_sq)));
    out.summary.push((
        "center".into(),
        res.center.coords().iter().map(|v| format_float(*v)).collect::<Vec<_>>().join(","),
    ));
    out.summary.push(("coreset_size".into(), res.coreset.len().to_string()));
    out.summary.push(("iterations".into(), res.iterations.to_string()));
    out.summary.push(("fw_gap".into(), format_float(res.fw_gap)));
    Ok(())
}

/// Whitespace-separated numeric rows, one point per row.
pub fn load_points(path: &str) -> Result<Vec<Point>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("reading {path}: {e}")))?;
    let mut points = Vec::new();
    let mut dim = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let coords: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| {
                    Error::Config(format!("{path} line {}: not a number: `{tok}`", lineno + 1))
                })
            })
            .collect::<Result<_>>()?;
        match dim {
            None => dim = Some(coords.len()),
            Some(d) if d != coords.len() => {
                return Err(Error::Config(format!(
                    "{path} line {}: expected {d} coordinates",
                    lineno + 1
                )))
            }
            _ => {}
        }
        points.push(Point::new(coords));
    }
    if points.is_empty() {
        return Err(Error::Config(format!("{path}: no points")));
    }
    Ok(points)
}

fn dopt_gaussian(ctx: &Ctx, out: &mut ExperimentOutput) -> Result<()> {
    let vectors = instances::gaussian_vectors(50, 3, ctx.seed);
    let tol = ctx.tol.unwrap_or(1e-6);
    let iters = ctx.max_iters.unwrap_or(100_000);
    for (label, variant) in [("fw", DoptVariant::Fw), ("afw", DoptVariant::Afw)] {
        let res = dopt_design(vectors.clone(), tol, iters, variant)?;
        out.summary.push((format!("{label}.log_det"), format_float(res.state.log_det)));
        out.summary.push((format!("{label}.fw_gap"), format_float(res.fw_gap)));
        out.summary.push((format!("{label}.iterations"), res.iterations.to_string()));
        out.summary.push((format!("{label}.converged"), res.converged.to_string()));
    }
    Ok(())
}

/// Inline problem specs: objective, region, algorithm and step rule
/// assembled from dotted config keys.
mod inline {
    use super::*;
    use condgrad::algorithms::{run_boostfw, run_fcfw, BoostConfig};
    use condgrad::objectives::SinQuadratic;

    fn require<'a>(cfg: &'a ExperimentConfig, key: &str) -> Result<&'a str> {
        cfg.get(key).ok_or_else(|| Error::Config(format!("missing field `{key}`")))
    }

    fn build_objective(cfg: &ExperimentConfig) -> Result<DiagObjective> {
        let kind = require(cfg, "objective.kind")?;
        let obj: DiagObjective = match kind {
            "norm_sq" => {
                let n = cfg.get_u64("objective.n")?.ok_or_else(|| {
                    Error::Config("missing field `objective.n`".into())
                })? as usize;
                DiagObjective::Quadratic(DiagQuadratic::norm_sq(n))
            }
            "diag_quadratic" => {
                let weights = cfg.get_f64_list("objective.weights")?.ok_or_else(|| {
                    Error::Config("missing field `objective.weights`".into())
                })?;
                let center = cfg.get_f64_list("objective.center")?.ok_or_else(|| {
                    Error::Config("missing field `objective.center`".into())
                })?;
                if weights.len() != center.len() {
                    return Err(Error::Config(
                        "objective.weights and objective.center lengths differ".into(),
                    ));
                }
                if weights.iter().any(|&w| w <= 0.0) {
                    return Err(Error::Config("objective.weights must be positive".into()));
                }
                DiagObjective::Quadratic(DiagQuadratic::new(weights, center))
            }
            "sin_quadratic" => {
                let a = cfg.get_f64("objective.a")?.unwrap_or(1.0);
                let b = cfg.get_f64("objective.b")?.unwrap_or(1.0);
                let w = cfg.get_f64("objective.w")?.unwrap_or(3.0);
                let center = cfg.get_f64_list("objective.center")?.ok_or_else(|| {
                    Error::Config("missing field `objective.center`".into())
                })?;
                DiagObjective::Sin(SinQuadratic::new(a, b, w, center))
            }
            "distance_p" => {
                let u = cfg.get_f64_list("objective.u")?.ok_or_else(|| {
                    Error::Config("missing field `objective.u`".into())
                })?;
                let p = cfg.get_f64("objective.p")?.unwrap_or(2.0);
                if p < 2.0 {
                    return Err(Error::Config("objective.p must be >= 2".into()));
                }
                DiagObjective::Distance(condgrad::objectives::DistancePower::new(
                    Point::new(u),
                    p,
                ))
            }
            other => {
                return Err(Error::Config(format!(
                    "objective.kind `{other}` not recognized (norm_sq | diag_quadratic | sin_quadratic | distance_p)"
                )))
            }
        };
        Ok(obj)
    }

    pub(super) enum DiagObjective {
        Quadratic(DiagQuadratic),
        Sin(SinQuadratic),
        Distance(condgrad::objectives::DistancePower),
    }

    impl DiagObjective {
        fn as_dyn(&self) -> &dyn Objective {
            match self {
                DiagObjective::Quadratic(f) => f,
                DiagObjective::Sin(f) => f,
                DiagObjective::Distance(f) => f,
            }
        }
    }

    fn build_region(cfg: &ExperimentConfig) -> Result<FeasibleRegion> {
        let kind = require(cfg, "region.kind")?;
        let n = || -> Result<usize> {
            Ok(cfg
                .get_u64("region.n")?
                .ok_or_else(|| Error::Config("missing field `region.n`".into()))?
                as usize)
        };
        let tau = cfg.get_f64("region.tau")?.unwrap_or(1.0);
        Ok(match kind {
            "simplex" => FeasibleRegion::Simplex { n: n()? },
            "l1_ball" => FeasibleRegion::L1Ball { n: n()?, tau },
            "lp_ball" => FeasibleRegion::LpBall {
                n: n()?,
                tau,
                p: cfg.get_f64("region.p")?.unwrap_or(2.0),
            },
            "box" => {
                let lower = cfg.get_f64_list("region.lower")?.ok_or_else(|| {
                    Error::Config("missing field `region.lower`".into())
                })?;
                let upper = cfg.get_f64_list("region.upper")?.ok_or_else(|| {
                    Error::Config("missing field `region.upper`".into())
                })?;
                if lower.len() != upper.len() || lower.iter().zip(&upper).any(|(l, u)| l > u) {
                    return Err(Error::Config("region.lower/upper malformed".into()));
                }
                FeasibleRegion::Box { lower, upper }
            }
            "hypercube01" => FeasibleRegion::Hypercube01 { n: n()? },
            "nuclear_ball" => FeasibleRegion::NuclearBall {
                rows: cfg.get_u64("region.rows")?.ok_or_else(|| {
                    Error::Config("missing field `region.rows`".into())
                })? as usize,
                cols: cfg.get_u64("region.cols")?.ok_or_else(|| {
                    Error::Config("missing field `region.cols`".into())
                })? as usize,
                tau,
            },
            "birkhoff" => FeasibleRegion::Birkhoff { n: n()? },
            other => {
                return Err(Error::Config(format!(
                    "region.kind `{other}` not recognized"
                )))
            }
        })
    }

    fn build_step_rule(cfg: &ExperimentConfig) -> Result<StepRule> {
        Ok(match cfg.get("step.rule").unwrap_or("open_loop") {
            "open_loop" => StepRule::OpenLoop {
                shift: cfg.get_u64("step.shift")?.unwrap_or(2).max(2),
            },
            "inv_sqrt" => StepRule::InvSqrt,
            "short" => StepRule::Short,
            "linesearch" => StepRule::LineSearch,
            "adaptive" => StepRule::Adaptive(AdaptiveState {
                l_tilde: cfg.get_f64("step.l0")?.unwrap_or(1.0),
                tau: cfg.get_f64("step.tau")?.unwrap_or(2.0),
                eta: cfg.get_f64("step.eta")?.unwrap_or(0.9),
                alpha: cfg.get_f64("step.alpha")?.unwrap_or(0.5),
            }),
            other => {
                return Err(Error::Config(format!(
                    "step.rule `{other}` not recognized (open_loop | short | linesearch | adaptive | inv_sqrt)"
                )))
            }
        })
    }

    pub(super) fn run(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        let objective = build_objective(cfg)?;
        let f = objective.as_dyn();
        let region = build_region(cfg)?;
        if region.dim()
            != match &objective {
                DiagObjective::Quadratic(q) => q.weights.len(),
                DiagObjective::Sin(s) => s.center.len(),
                DiagObjective::Distance(d) => d.u.dim(),
            }
        {
            return Err(Error::Config(
                "objective and region dimensions disagree".into(),
            ));
        }
        let algo = cfg.get("algorithm.name").unwrap_or("fw");
        let run_cfg = RunConfig {
            max_iters: cfg.get_u64("run.max_iters")?.unwrap_or(1000),
            tol: cfg.get_f64("run.tol")?.unwrap_or(1e-8),
            step_rule: build_step_rule(cfg)?,
            seed: cfg.get_u64("run.seed")?.unwrap_or(0),
            record_every: cfg.get_u64("run.record_every")?.unwrap_or(1).max(1),
            ..Default::default()
        };
        let k = cfg.get_f64("algorithm.k")?.unwrap_or(1.0);
        let res = match algo {
            "fw" => run_fw(f, &region, &run_cfg)?,
            "afw" => run_afw(f, &region, &run_cfg)?,
            "pfw" => run_pfw(f, &region, &run_cfg)?,
            "dipfw" => run_dipfw(f, &region, &run_cfg, DipfwStepMode::LineSearch)?,
            "fcfw" => run_fcfw(f, &region, &run_cfg)?,
            "lcg" => run_lazy(LazyVariant::Fw, f, &region, &run_cfg, k, None)?,
            "lazy_afw" => run_lazy(LazyVariant::Afw, f, &region, &run_cfg, k, None)?,
            "bcg" => run_bcg(f, &region, &run_cfg, k)?,
            "nepfw" => run_nepfw(f, &region, &run_cfg)?,
            "boostfw" => {
                let boost = BoostConfig {
                    max_rounds: cfg.get_u64("algorithm.max_rounds")?.unwrap_or(128),
                    delta: cfg.get_f64("algorithm.delta")?.unwrap_or(1e-3),
                };
                run_boostfw(f, &region, &run_cfg, &boost)?
            }
            "cgs" => {
                let l = match cfg.get_f64("algorithm.l")? {
                    Some(l) => l,
                    None => f.smoothness().ok_or_else(|| {
                        Error::Config("cgs needs algorithm.l or a smooth objective".into())
                    })?,
                };
                let schedule = CgsSchedule::standard(l, region.diameter());
                run_cgs(f, &region, &run_cfg, &schedule)?
            }
            other => {
                return Err(Error::Config(format!(
                    "algorithm.name `{other}` not recognized"
                )))
            }
        };
        let mut out = ExperimentOutput {
            name: format!("inline-{algo}"),
            traces: Vec::new(),
            summary: Vec::new(),
            resolved: cfg.clone(),
        };
        push_run(&mut out, algo, &res);
        Ok(out)
    }
}
