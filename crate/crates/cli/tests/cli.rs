//! CLI-level behavior: exit codes, catalog, config handling, output files,
//! and summary-vs-trace counter consistency.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_condgrad"))
}

#[test]
fn list_prints_the_full_catalog() {
    let out = bin().arg("list").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for (name, _) in condgrad_cli::experiments::CATALOG {
        assert!(text.contains(name), "catalog entry {name} missing");
    }
}

#[test]
fn list_plain_is_machine_readable() {
    let out = bin().args(["list", "--plain"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), condgrad_cli::experiments::CATALOG.len());
    assert!(lines.iter().all(|l| !l.contains(' ')));
}

#[test]
fn unknown_experiment_suggests_nearest_matches_with_exit_2() {
    let out = bin().args(["run", "scalar-quadrati"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("scalar-quadratic"), "no nearest-match hint: {err}");
}

#[test]
fn bad_config_field_reports_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "experiment = scalar-quadratic\nrun.seed = banana\n").unwrap();
    let out = bin().args(["run"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("run.seed"), "field path missing: {err}");
}

#[test]
fn run_writes_traces_summary_and_resolved_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "zigzag-triangle", "--seed", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().any(|n| n == "zigzag-triangle__fw__seed3.csv"));
    assert!(names.iter().any(|n| n == "zigzag-triangle__summary.txt"));
    assert!(names.iter().any(|n| n == "zigzag-triangle__config.txt"));
    // resolved config re-runs verbatim
    let cfg_path = dir.path().join("zigzag-triangle__config.txt");
    let rerun_dir = tempfile::tempdir().unwrap();
    let rerun = bin()
        .args(["run"])
        .arg(&cfg_path)
        .args(["--out"])
        .arg(rerun_dir.path())
        .output()
        .unwrap();
    assert!(rerun.status.success());
    let a = std::fs::read(dir.path().join("zigzag-triangle__fw__seed3.csv")).unwrap();
    let b = std::fs::read(rerun_dir.path().join("zigzag-triangle__fw__seed3.csv")).unwrap();
    assert_eq!(a, b, "resolved config did not reproduce the trace");
}

#[test]
fn summary_counters_match_the_trace_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "zigzag-triangle", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary =
        std::fs::read_to_string(dir.path().join("zigzag-triangle__summary.txt")).unwrap();
    for label in ["fw", "afw", "pfw", "fcfw"] {
        let trace =
            std::fs::read_to_string(dir.path().join(format!("zigzag-triangle__{label}__seed0.csv")))
                .unwrap();
        let last = trace.lines().last().unwrap();
        let cols: Vec<&str> = last.split(',').collect();
        let lmo_from_trace: u64 = cols[5].parse().unwrap();
        let summary_line = summary
            .lines()
            .find(|l| l.starts_with(&format!("{label}.lmo_calls")))
            .unwrap();
        let lmo_from_summary: u64 =
            summary_line.split('=').nth(1).unwrap().trim().parse().unwrap();
        assert_eq!(lmo_from_summary, lmo_from_trace, "{label} counters disagree");
    }
}

#[test]
fn lower_bound_experiment_reports_zero_violations() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "lower-bound-simplex", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary =
        std::fs::read_to_string(dir.path().join("lower-bound-simplex__summary.txt")).unwrap();
    assert!(
        summary.contains("lower_bound_violations_total = 0"),
        "sparsity lower bound violated:\n{summary}"
    );
}
