//! Acceptance suite: every criterion runs as its own test and prints one
//! pass/fail line with its headline numbers.

use bounds_cli::verify::{run_suite, Suite, SUITE_NAMES};
use std::time::Instant;

const SEED: u64 = 0xB0DD_5EED;

fn require(criterion: &str, suite: &Suite, elapsed_limit: Option<(f64, f64)>) {
    let status = if suite.passed() { "PASS" } else { "FAIL" };
    println!(
        "{criterion}: {status} ({} checks, {} failing)",
        suite.checks.len(),
        suite.failures().len()
    );
    for check in &suite.checks {
        println!(
            "    [{}] {} {:?}",
            if check.pass { "ok" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    if let Some((elapsed, limit)) = elapsed_limit {
        println!("    runtime {elapsed:.1}s (limit {limit}s)");
        assert!(
            elapsed < limit,
            "{criterion}: runtime {elapsed:.1}s exceeded the {limit}s budget"
        );
    }
    assert!(
        suite.passed(),
        "{criterion} failed: {:?}",
        suite
            .failures()
            .iter()
            .map(|c| (&c.name, &c.detail))
            .collect::<Vec<_>>()
    );
}

#[test]
fn criterion_01_tail_bound_suite() {
    let t = Instant::now();
    let suite = run_suite("tails", SEED, Some(1_000_000)).unwrap();
    require(
        "criterion 01 (tail bounds + Gaussian sandwich)",
        &suite,
        Some((t.elapsed().as_secs_f64(), 30.0)),
    );
}

#[test]
fn criterion_02_covering_packing_exactness() {
    let t = Instant::now();
    let suite = run_suite("covering", SEED, None).unwrap();
    require(
        "criterion 02 (covering/packing sandwich, n <= 8)",
        &suite,
        Some((t.elapsed().as_secs_f64(), 60.0)),
    );
}

#[test]
fn criterion_03_rate_distortion_trend() {
    let suite = run_suite("rd", SEED, None).unwrap();
    require("criterion 03 (rate-distortion trend at D = 0.11)", &suite, None);
}

#[test]
fn criterion_04_lipschitz_packing() {
    let suite = run_suite("lipschitz", SEED, None).unwrap();
    require("criterion 04 (Lipschitz sign-pattern packing)", &suite, None);
}

#[test]
fn criterion_05_rademacher_exact_vs_mc() {
    let suite = run_suite("rademacher", SEED, Some(100_000)).unwrap();
    require(
        "criterion 05 (Rademacher exact vs MC + symmetrization)",
        &suite,
        None,
    );
}

#[test]
fn criterion_06_finite_class_bound() {
    let suite = run_suite("finite-class", SEED, None).unwrap();
    require(
        "criterion 06 (finite-class bound + sqrt(n) scaling)",
        &suite,
        None,
    );
}

#[test]
fn criterion_07_vc_suite() {
    let suite = run_suite("vc", SEED, None).unwrap();
    require("criterion 07 (VC certificate + Sauer domination)", &suite, None);
}

#[test]
fn criterion_08_gibbs_suite() {
    let t = Instant::now();
    let suite = run_suite("gibbs", SEED, None).unwrap();
    require(
        "criterion 08 (Gibbs stability/information/generalization/MCMC)",
        &suite,
        Some((t.elapsed().as_secs_f64(), 120.0)),
    );
}

#[test]
fn criterion_09_mi_bounds() {
    let suite = run_suite("mi", SEED, None).unwrap();
    require(
        "criterion 09 (mutual-information bounds, exact oracles)",
        &suite,
        None,
    );
}

#[test]
fn criterion_10_pac_bayes_coverage() {
    let suite = run_suite("pac-bayes", SEED, None).unwrap();
    require("criterion 10 (PAC-Bayes coverage at delta = 0.1)", &suite, None);
}

#[test]
fn criterion_11_gaussian_mean_fano() {
    let suite = run_suite("gauss-fano", SEED, None).unwrap();
    require(
        "criterion 11 (Gaussian-mean pipeline values + packing certificates)",
        &suite,
        None,
    );
}

#[test]
fn criterion_12_density_construction() {
    let suite = run_suite("density", SEED, None).unwrap();
    require(
        "criterion 12 (density construction audits + power law)",
        &suite,
        None,
    );
}

#[test]
fn criterion_13_testing_reduction() {
    let suite = run_suite("reduction", SEED, None).unwrap();
    require(
        "criterion 13 (estimation-to-testing reduction directions)",
        &suite,
        None,
    );
}

#[test]
fn criterion_14_binary_minimax_test() {
    let suite = run_suite("binary-test", SEED, None).unwrap();
    require("criterion 14 (exact binary minimax test)", &suite, None);
}

#[test]
fn criterion_15_determinism_and_total_runtime() {
    // Every suite rerun with the same seed must serialize to byte-identical
    // results, and the whole battery must finish inside ten minutes.
    let t = Instant::now();
    let mut all_pass = true;
    for name in SUITE_NAMES {
        let a = run_suite(name, SEED, None).unwrap();
        let b = run_suite(name, SEED, None).unwrap();
        let ja = serde_json::to_string(&a.to_results_json()).unwrap();
        let jb = serde_json::to_string(&b.to_results_json()).unwrap();
        assert_eq!(ja, jb, "suite {name} is not deterministic under a fixed seed");
        all_pass &= a.passed();
    }
    let elapsed = t.elapsed().as_secs_f64();
    println!(
        "criterion 15 (determinism + total runtime): {} (two full battery runs in {elapsed:.1}s, limit 600s)",
        if all_pass { "PASS" } else { "FAIL" }
    );
    assert!(elapsed < 600.0, "two full runs took {elapsed:.1}s");
    assert!(all_pass);
}
