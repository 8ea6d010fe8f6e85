//! Cross-module invariants: identities and dominations that tie the bound
//! formulas to exact or Monte Carlo oracles.

use bounds_core::concentration::{
    empirical_tail_check, subgaussian_tail_bound, SourceDist, SubgaussianSpec, TailStatistic,
    TailVariant,
};
use bounds_core::infogen::{
    exact_expected_generalization, exact_mutual_information, gibbs_learner, gibbs_risk_exact_mc,
    kl_pmf, FiniteInstance,
};
use bounds_core::learning::{erm_finite, worst_case_gap_mc, FiniteProblem};
use bounds_core::minimax::{
    global_fano_bound, local_fano_bound, nonlinear_regression_pipeline, FanoInstance, LossShape,
};
use bounds_core::rng::{for_each_trial, stream_rng, OnlineStats};

const SEED: u64 = 0x1a7e;

#[test]
fn erm_excess_risk_is_dominated_by_the_worst_case_gap() {
    // E(L(w_erm) - L(w*)) <= E sup |L - L_n|, and the empirical minimizer
    // never loses to w* on its own sample.
    let problem = FiniteProblem::evenly_spaced(6).unwrap();
    let n = 40u64;
    let best = problem.best_model();
    let mut excess = OnlineStats::default();
    let mut sign_ok = true;
    for_each_trial(SEED, 3_000, |rng| {
        let data = problem.sample_dataset(n, rng);
        let models: Vec<usize> = (0..problem.models()).collect();
        let (erm, erm_emp) =
            erm_finite(&models, &data, |z, w| problem.loss(*z, *w)).unwrap();
        sign_ok &= erm_emp <= problem.empirical_risk(&data, best) + 1e-15;
        excess.push(problem.true_risk(erm) - problem.true_risk(best));
    });
    assert!(sign_ok, "ERM lost to w* on its own sample");
    let gap = worst_case_gap_mc(&problem, n, 3_000, SEED + 1).unwrap();
    let slack = 3.0 * (excess.std_error() + gap.std_error);
    assert!(
        excess.mean() <= gap.mean + slack,
        "excess {} vs gap {}",
        excess.mean(),
        gap.mean
    );
}

#[test]
fn fixed_model_loss_concentrates_at_the_subgaussian_rate() {
    // For a fixed model, the exceedance frequency of |L_n - L| obeys the
    // two-sided subgaussian tail with the Hoeffding proxy.
    let n = 25u64;
    for eps in [0.1, 0.2] {
        let report = empirical_tail_check(
            SourceDist::Uniform { a: 0.0, b: 1.0 },
            TailStatistic::SampleMean { n },
            eps,
            100_000,
            SEED,
        )
        .unwrap();
        let spec = SubgaussianSpec::new(0.0, 0.25).unwrap();
        let two_sided = subgaussian_tail_bound(&spec, eps, TailVariant::TwoSided, n).unwrap();
        // One-sided frequency is certainly below the two-sided bound.
        assert!(
            report.frequency <= two_sided.value + report.hoeffding_halfwidth,
            "eps = {eps}"
        );
    }
}

#[test]
fn information_identity_and_dropped_term_bound() {
    // I(W; Z^n) = E KL(posterior || prior) - KL(marginal || prior), exactly,
    // and dropping the second term only enlarges the quantity.
    let inst = FiniteInstance::binary_default();
    let beta = 2.5;
    let n = 6u64;
    let learner = gibbs_learner(&inst, beta).unwrap();
    let mi = exact_mutual_information(&inst, &learner, n).unwrap();
    // E KL(posterior || prior) over all datasets.
    let mut expected_kl = 0.0;
    let mut total_prob = 0.0;
    let zc = inst.z_card();
    let mut data = vec![0usize; n as usize];
    'outer: loop {
        let prob = inst.dataset_prob(&data);
        expected_kl += prob * kl_pmf(&learner.row(&data), inst.prior());
        total_prob += prob;
        let mut i = 0;
        loop {
            if i == data.len() {
                break 'outer;
            }
            data[i] += 1;
            if data[i] < zc {
                break;
            }
            data[i] = 0;
            i += 1;
        }
    }
    assert!((total_prob - 1.0).abs() < 1e-12);
    let marginal_kl = kl_pmf(&mi.w_marginal, inst.prior());
    assert!(
        (mi.joint_nats - (expected_kl - marginal_kl)).abs() < 1e-9,
        "identity violated: {} vs {}",
        mi.joint_nats,
        expected_kl - marginal_kl
    );
    assert!(mi.joint_nats <= expected_kl + 1e-12);
}

#[test]
fn gibbs_exact_risk_route_dominates_the_true_risk() {
    // The quadrature-free route: E L(W) for the Gibbs learner, exactly by
    // enumeration, against the Monte Carlo estimate of the analytic
    // right-hand side (log-partition term plus beta sigma^2 / 2n).
    let inst = FiniteInstance::binary_default();
    let beta = 3.0;
    let n = 8u64;
    let sigma2 = 0.25;
    let learner = gibbs_learner(&inst, beta).unwrap();
    // E L(W) = E(L - L_n) + E L_n(W); compute both exactly.
    let gen = exact_expected_generalization(&inst, &learner, n).unwrap();
    let mut expected_emp = 0.0;
    let zc = inst.z_card();
    let mut data = vec![0usize; n as usize];
    'outer: loop {
        let prob = inst.dataset_prob(&data);
        let row = learner.row(&data);
        for (w, &pw) in row.iter().enumerate() {
            expected_emp += prob * pw * inst.empirical_risk(&data, w);
        }
        let mut i = 0;
        loop {
            if i == data.len() {
                break 'outer;
            }
            data[i] += 1;
            if data[i] < zc {
                break;
            }
            data[i] = 0;
            i += 1;
        }
    }
    let expected_risk = gen + expected_emp;
    let rhs = gibbs_risk_exact_mc(&inst, beta, n, sigma2, 4_000, SEED).unwrap();
    assert!(
        expected_risk <= rhs.mean + 3.0 * rhs.std_error,
        "risk {} vs bound {} +- {}",
        expected_risk,
        rhs.mean,
        rhs.std_error
    );
}

#[test]
fn local_fano_on_the_constructed_packing_dominates_the_pipeline_value() {
    // The pipeline fixes the conservative constants; evaluating the Fano
    // bound on the actual constructed packing (exact divergence matrix,
    // actual packing size) can only be at least as strong.
    let out = bounds_core::minimax::gaussian_mean_pipeline(5, 20, 1.0, SEED).unwrap();
    assert!(out.packing_certified);
    let inst = FanoInstance::gaussian_location(out.packing.clone(), 1.0, 20).unwrap();
    let delta = out.delta;
    let rep = local_fano_bound(&inst, LossShape::Square, delta).unwrap();
    assert!(
        rep.lower_bound >= out.report.lower_bound - 1e-15,
        "constructed {} vs pipeline {}",
        rep.lower_bound,
        out.report.lower_bound
    );
}

#[test]
fn global_fano_routing_matches_the_regression_chain() {
    // Feeding the regression chain's exponents through the generic global
    // bound reproduces its error factor.
    let out = nonlinear_regression_pipeline(1.0, 1_000_000, None, None, LossShape::Square).unwrap();
    let c = out.constants;
    let rep = global_fano_bound(
        c.c3 / (1.0 * c.epsilon),
        out.report.parameters["log_m_bits"],
        1_000_000,
        c.epsilon,
        LossShape::Square,
        c.delta,
    )
    .unwrap();
    let pipeline_error = 1.0 - c.ratio;
    assert!((rep.error_prob_lower - pipeline_error).abs() < 1e-12);
}

#[test]
fn finite_instance_sampling_matches_the_pmf() {
    let inst = FiniteInstance::binary_default();
    let mut rng = stream_rng(SEED, 9);
    let draws = 200_000;
    let mut counts = vec![0u64; inst.z_card()];
    for _ in 0..draws {
        counts[inst.sample_z(&mut rng)] += 1;
    }
    for (z, &c) in counts.iter().enumerate() {
        let freq = c as f64 / draws as f64;
        assert!((freq - inst.z_pmf()[z]).abs() < 0.01, "z = {z}: {freq}");
    }
}
