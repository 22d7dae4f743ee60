//! Acceptance suite: every published threshold and identity in the acceptance
//! matrix, one test per criterion, at the tolerances pinned in
//! `steerdet::selftest`. Each test prints one line per check.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use steerdet::selftest::{property_suite, run_criterion, CheckResult, SelftestConfig};

fn assert_all_pass(results: &[CheckResult]) {
    assert!(!results.is_empty(), "criterion produced no checks");
    let mut failed = 0;
    for check in results {
        println!(
            "[{}] C{:02} {} — {}",
            if check.pass { "PASS" } else { "FAIL" },
            check.criterion,
            check.name,
            check.summary
        );
        if !check.pass {
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance check(s) failed");
}

fn run(criterion: usize) {
    let cfg = SelftestConfig::default();
    assert_all_pass(&run_criterion(criterion, &cfg));
}

#[test]
fn criterion_01_werner_thresholds() {
    run(1);
}

#[test]
fn criterion_02_werner_converse_gap() {
    run(2);
}

#[test]
fn criterion_03_munro_thresholds() {
    run(3);
}

#[test]
fn criterion_04_nmems_thresholds() {
    run(4);
}

#[test]
fn criterion_05_msms_two_sided_boundary() {
    run(5);
}

#[test]
fn criterion_06_one_way_thresholds() {
    run(6);
}

#[test]
fn criterion_07_amplitude_damping_thresholds() {
    run(7);
}

#[test]
fn criterion_08_lossy_werner_boundary_independent_of_loss() {
    run(8);
}

#[test]
fn criterion_09_detection_region_scan() {
    run(9);
}

#[test]
fn criterion_10_conditional_state_identity() {
    run(10);
}

#[test]
fn criterion_11_channel_realization_identity() {
    run(11);
}

#[test]
fn criterion_12_spa_matches_ppt() {
    run(12);
}

#[test]
fn criterion_13_property_suites_at_three_seeds() {
    for seed in [42, 7, 1234] {
        assert_all_pass(&property_suite(seed, 1.0));
    }
}
