//! One test per acceptance criterion; each prints a PASS/FAIL line.

use qwalk_core::validate::run_criterion;

fn check(id: u8) {
    let outcome = run_criterion(id);
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_01_main_asymptotic() {
    check(1);
}

#[test]
fn criterion_02_tau_tail_constant() {
    check(2);
}

#[test]
fn criterion_03_analytic_matches_dp() {
    check(3);
}

#[test]
fn criterion_04_functional_equation() {
    check(4);
}

#[test]
fn criterion_05_coefficient_extraction() {
    check(5);
}

#[test]
fn criterion_06_branch_points() {
    check(6);
}

#[test]
fn criterion_07_gluing_and_group() {
    check(7);
}

#[test]
fn criterion_08_boundary_condition() {
    check(8);
}

#[test]
fn criterion_09_cancellation() {
    check(9);
}

#[test]
fn criterion_10_integral_lemmas() {
    check(10);
}

#[test]
fn criterion_11_monte_carlo() {
    check(11);
}
