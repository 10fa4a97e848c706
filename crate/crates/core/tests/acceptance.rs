//! Acceptance criteria at their pinned tolerances, one line per criterion.

use valconv::verify::{run_criterion, Config, CriterionReport};

fn run(id: u32) -> CriterionReport {
    let report = run_criterion(id, &Config::default()).expect("criterion runs");
    println!("{}", report.summary_line());
    for a in report.assertions.iter().filter(|a| !a.passed) {
        println!(
            "    failed: {} (measured {:e}, expected {:e}, tolerance {:e})",
            a.name, a.measured, a.expected, a.tolerance
        );
    }
    report
}

fn check(id: u32, max_seconds: Option<f64>) {
    let report = run(id);
    assert!(report.passed, "criterion {id} failed");
    if let Some(limit) = max_seconds {
        assert!(
            report.seconds < limit,
            "criterion {id} took {:.2}s, limit {limit}s",
            report.seconds
        );
    }
}

#[test]
fn criterion_01_oned_engine_agreement() {
    check(1, Some(30.0));
}

#[test]
fn criterion_02_associativity() {
    check(2, Some(60.0));
}

#[test]
fn criterion_03_dirac_unit() {
    check(3, None);
}

#[test]
fn criterion_04_averaging_homomorphism() {
    check(4, None);
}

#[test]
fn criterion_05_support_containment() {
    check(5, None);
}

#[test]
fn criterion_06_steiner() {
    check(6, Some(10.0));
}

#[test]
fn criterion_07_normal_cycle_projection() {
    check(7, None);
}

#[test]
fn criterion_08_tau_smooth() {
    check(8, None);
}

#[test]
fn criterion_09_tau_square() {
    check(9, None);
}

#[test]
fn criterion_10_rotational_smoothing() {
    check(10, None);
}

#[test]
fn criterion_11_convolution_paths() {
    check(11, None);
}
