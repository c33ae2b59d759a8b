//! Acceptance suite: runs the full verification suite on seed 42 and
//! asserts every criterion at its pinned tolerance, printing one
//! pass/fail line per criterion. The determinism criterion runs the
//! entire suite twice — once on one worker, once on eight — and demands
//! byte-identical reports.

use std::sync::OnceLock;
use std::time::Instant;

use dyson_edge_core::verify::{
    render_report_csv, render_report_json, run_suite, SuiteConfig, TestReport,
};

struct SuiteRun {
    reports: Vec<TestReport>,
    json: String,
    csv: String,
    seconds: f64,
}

fn run_with_parallelism(threads: usize) -> SuiteRun {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    let cfg = SuiteConfig { seed: 42, tests: None };
    let start = Instant::now();
    let reports = pool.install(|| run_suite(&cfg)).expect("suite run");
    SuiteRun {
        json: render_report_json(&reports),
        csv: render_report_csv(&reports),
        seconds: start.elapsed().as_secs_f64(),
        reports,
    }
}

fn suite_p8() -> &'static SuiteRun {
    static RUN: OnceLock<SuiteRun> = OnceLock::new();
    RUN.get_or_init(|| run_with_parallelism(8))
}

/// Assert that every named report exists and passes; print the criterion
/// verdict line.
fn assert_criterion(number: u8, description: &str, names: &[&str]) {
    let run = suite_p8();
    let mut ok = true;
    let mut details = Vec::new();
    for name in names {
        let report = run
            .reports
            .iter()
            .find(|r| r.name == *name)
            .unwrap_or_else(|| panic!("criterion {number}: report '{name}' missing"));
        ok &= report.pass;
        details.push(format!(
            "{name}: {:.3e} (thr {:.3e})",
            report.statistic, report.threshold
        ));
    }
    println!(
        "criterion {number:02} {}: {description} [{}]",
        if ok { "PASS" } else { "FAIL" },
        details.join("; ")
    );
    assert!(ok, "criterion {number} failed: {}", details.join("; "));
}

#[test]
fn criterion_01_deterministic_quadrature() {
    assert_criterion(
        1,
        "semicircle quadrature identities",
        &[
            "quadrature_inverse_gap_integral",
            "quadrature_semicircle_mass",
            "quadrature_semicircle_mean",
        ],
    );
}

#[test]
fn criterion_02_exact_inverse_gap_identity() {
    assert_criterion(2, "integration-by-parts identity at N = 100", &["inverse_gap_identity"]);
}

#[test]
fn criterion_03_inverse_gap_limits() {
    assert_criterion(
        3,
        "inverse-gap sums concentrate at 1, second moment bracketed",
        &[
            "inverse_gap_sum_same_level",
            "inverse_gap_sum_cross_level",
            "inverse_gap_second_moment",
        ],
    );
}

#[test]
fn criterion_04_fixed_time_spacing_law() {
    assert_criterion(
        4,
        "edge spacings follow the Gamma law at fixed time",
        &[
            "spacing_law_corners_beta2",
            "spacing_mean_corners_beta2",
            "spacing_independence_corners_beta2",
            "spacing_law_dense_goe",
            "spacing_law_dense_gse",
        ],
    );
}

#[test]
fn criterion_05_sampler_cross_validation() {
    assert_criterion(
        5,
        "tridiagonal and conditional samplers match the dense oracles",
        &[
            "cross_validation_top_eigenvalue",
            "corner_conditional_vs_dense_goe",
            "corner_conditional_vs_dense_gue",
            "corner_conditional_vs_dense_gse",
        ],
    );
}

#[test]
fn criterion_06_semicircle_and_rigidity() {
    assert_criterion(
        6,
        "semicircle histogram and bulk rigidity at N = 500",
        &["semicircle_histogram", "bulk_rigidity"],
    );
}

#[test]
fn criterion_07_stationarity() {
    assert_criterion(
        7,
        "product Gamma law invariant for the limit diffusion",
        &["limit_stationarity_t1", "limit_stationarity_t5"],
    );
}

#[test]
fn criterion_08_restriction_consistency() {
    assert_criterion(
        8,
        "leading coordinates of k = 3 match a direct k = 1 run",
        &["restriction_consistency"],
    );
}

#[test]
fn criterion_09_positivity_and_z_equivalence() {
    assert_criterion(
        9,
        "no boundary hits; position differences equal the spacing law",
        &["limit_positivity", "z_r_difference_law"],
    );
}

#[test]
fn criterion_10_bessel_domination() {
    assert_criterion(10, "comparison process dominates pathwise", &["bessel_domination"]);
}

#[test]
fn criterion_11_adjoint_annihilation() {
    assert_criterion(
        11,
        "adjoint generator annihilates the product Gamma density",
        &["generator_adjoint_annihilation"],
    );
}

#[test]
fn criterion_12_dynamic_limit() {
    assert_criterion(
        12,
        "interacting dynamics keeps the Gamma spacing law; remainders vanish",
        &["mdbm_spacings_warm_start", "mdbm_spacings_t05", "mdbm_remainder_drifts"],
    );
}

#[test]
fn criterion_13_determinism() {
    let p8 = suite_p8();
    let p1 = run_with_parallelism(1);
    let identical = p1.json == p8.json && p1.csv == p8.csv;
    println!(
        "criterion 13 {}: byte-identical reports across two runs at parallelism 1 and 8 \
         [p8 {:.0}s, p1 {:.0}s]",
        if identical { "PASS" } else { "FAIL" },
        p8.seconds,
        p1.seconds
    );
    assert_eq!(p1.json, p8.json, "JSON reports differ between parallelism 1 and 8");
    assert_eq!(p1.csv, p8.csv, "CSV reports differ between parallelism 1 and 8");
}
