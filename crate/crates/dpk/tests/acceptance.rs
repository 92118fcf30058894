//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line. Monte Carlo criteria use their full sample sizes here;
//! `dpk verify --suite fast` replays the same checks with trimmed ensembles.

use dpk::acceptance::{self, Criterion, Scale};

fn check(c: Criterion) {
    println!("{}", c.line());
    assert!(c.passed, "{}", c.line());
}

#[test]
fn criterion_01_survival_vs_reflection() {
    check(acceptance::criterion_01(Scale::Full));
}

#[test]
fn criterion_02_absorbing_density_identity() {
    check(acceptance::criterion_02());
}

#[test]
fn criterion_03_mehler_vs_heat_kernel() {
    check(acceptance::criterion_03());
}

#[test]
fn criterion_04_density_normalization() {
    check(acceptance::criterion_04());
}

#[test]
fn criterion_05_wigner_semicircle() {
    check(acceptance::criterion_05());
}

#[test]
fn criterion_06_bulk_limit() {
    check(acceptance::criterion_06());
}

#[test]
fn criterion_07_edge_limit() {
    check(acceptance::criterion_07());
}

#[test]
fn criterion_08_airy_equal_time_identity() {
    check(acceptance::criterion_08());
}

#[test]
fn criterion_09_gap_probability_cross_check() {
    check(acceptance::criterion_09(Scale::Full));
}

#[test]
fn criterion_10_multitime_vs_monte_carlo() {
    check(acceptance::criterion_10(Scale::Full));
}

#[test]
fn criterion_11_transition_kernel_closed_forms() {
    check(acceptance::criterion_11());
}

#[test]
fn criterion_12_fourth_moment_bound() {
    check(acceptance::criterion_12());
}

#[test]
fn criterion_13_scaled_hermite_limits() {
    check(acceptance::criterion_13());
}

#[test]
fn criterion_14_two_time_expansion() {
    check(acceptance::criterion_14());
}

#[test]
fn criterion_15_heine_identity() {
    check(acceptance::criterion_15());
}
