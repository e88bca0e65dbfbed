//! The acceptance suite: each criterion prints its pass/fail line and
//! asserts. `condgrad selftest` runs the same battery from the CLI.

use condgrad_cli::selftest::{self, CriterionResult};

fn assert_criterion(r: CriterionResult) {
    println!("{}", r.line());
    match &r.outcome {
        Ok(_) => assert!(
            r.elapsed_ms <= r.budget_ms,
            "criterion {} exceeded its runtime budget: {:.1} ms > {:.0} ms",
            r.id,
            r.elapsed_ms,
            r.budget_ms
        ),
        Err(e) => panic!("criterion {} failed: {e}", r.id),
    }
}

#[test]
fn criterion_01_exact_1d_open_loop_trajectory() {
    assert_criterion(selftest::criterion_01());
}

#[test]
fn criterion_02_short_step_geometric_decay() {
    assert_criterion(selftest::criterion_02());
}

#[test]
fn criterion_03_simplex_finite_termination() {
    assert_criterion(selftest::criterion_03());
}

#[test]
fn criterion_04_vanilla_rate_bound() {
    assert_criterion(selftest::criterion_04());
}

#[test]
fn criterion_05_nonconvex_gap_rate() {
    assert_criterion(selftest::criterion_05());
}

#[test]
fn criterion_06_lmo_oracle_equivalence() {
    assert_criterion(selftest::criterion_06());
}

#[test]
fn criterion_07_linear_convergence_of_active_set_methods() {
    assert_criterion(selftest::criterion_07());
}

#[test]
fn criterion_08_lazification_economy() {
    assert_criterion(selftest::criterion_08());
}

#[test]
fn criterion_09_sliding_gradient_economy() {
    assert_criterion(selftest::criterion_09());
}

#[test]
fn criterion_10_zero_noise_reductions() {
    assert_criterion(selftest::criterion_10());
}

#[test]
fn criterion_11_stochastic_ensemble() {
    assert_criterion(selftest::criterion_11());
}

#[test]
fn criterion_12_simplex_descent_contract() {
    assert_criterion(selftest::criterion_12());
}

#[test]
fn criterion_13_adaptive_step_soundness() {
    assert_criterion(selftest::criterion_13());
}

#[test]
fn criterion_14_caratheodory_sparsity_accuracy() {
    assert_criterion(selftest::criterion_14());
}

#[test]
fn criterion_15_meb_against_exact_oracle() {
    assert_criterion(selftest::criterion_15());
}

#[test]
fn criterion_16_design_closed_form_and_rank1() {
    assert_criterion(selftest::criterion_16());
}

#[test]
fn criterion_17_gradient_checks() {
    assert_criterion(selftest::criterion_17());
}

#[test]
fn criterion_18_byte_identical_reruns() {
    let bin = std::path::Path::new(env!("CARGO_BIN_EXE_condgrad"));
    assert_criterion(selftest::criterion_18(bin));
}
