//! Verification suites: each suite checks one family of inequalities at
//! fixed tolerances and reports one pass/fail line per check. The
//! acceptance test target runs every suite and requires all checks green.

use bounds_core::concentration::{
    empirical_tail_check, gaussian_tail_sandwich, subgaussian_tail_bound, SourceDist,
    TailStatistic, TailVariant,
};
use bounds_core::entropy::{
    analytic_entropy_bounds, covering_number_with_budget, exact_packing_number_budgeted,
    lipschitz_packing_family, rd_compare, sup_distance, CoverOutcome, EntropyFamily,
    FiniteMetricSpace, RdSource,
};
use bounds_core::infogen::{
    exact_mutual_information, gaussian_mean_individual_mi, gibbs_finite, gibbs_gaussian_mean,
    gibbs_gen_bound, gibbs_learner, mc_expected_generalization, mi_gen_bound,
    neighbor_posterior_kl_max, pac_bayes_coverage, plugin_mi_binned, simulate_mean_pairs,
    argmin_learner, FiniteInstance, McmcConfig, MiBoundSource,
};
use bounds_core::learning::{
    finite_class_bound, rademacher_exact, rademacher_mc, sauer_bound,
    shatter_coefficient_halfspaces, vc_dimension_search, worst_case_gap_mc, FiniteProblem,
};
use bounds_core::minimax::{
    binary_test_minimax, density_packing_pipeline, gaussian_mean_pipeline,
    testing_reduction_sim, FanoInstance, LossShape,
    ReductionEstimator,
};
use bounds_core::quad::std_normal_upper_tail;
use bounds_core::rng::{derive_seed, stream_rng, OnlineStats};
use bounds_core::Result;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: BTreeMap<String, f64>,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub name: String,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_results_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "pass": c.pass,
                    "detail": c.detail,
                })
            })
            .collect();
        json!({
            "suite": self.name,
            "passed": self.passed(),
            "checks": checks,
        })
    }
}

pub const SUITE_NAMES: [&str; 14] = [
    "tails",
    "covering",
    "rd",
    "lipschitz",
    "rademacher",
    "finite-class",
    "vc",
    "gibbs",
    "mi",
    "pac-bayes",
    "gauss-fano",
    "density",
    "reduction",
    "binary-test",
];

pub fn run_suite(name: &str, seed: u64, trials: Option<u64>) -> Result<Suite> {
    match name {
        "tails" => tails_suite(seed, trials.unwrap_or(1_000_000)),
        "covering" => covering_suite(),
        "rd" => rd_suite(),
        "lipschitz" => lipschitz_suite(seed),
        "rademacher" => rademacher_suite(seed, trials.unwrap_or(100_000)),
        "finite-class" => finite_class_suite(seed, trials.unwrap_or(6_000)),
        "vc" => vc_suite(seed),
        "gibbs" => gibbs_suite(seed, trials.unwrap_or(20_000)),
        "mi" => mi_suite(seed, trials.unwrap_or(40_000)),
        "pac-bayes" => pac_bayes_suite(seed),
        "gauss-fano" => gauss_fano_suite(seed),
        "density" => density_suite(seed),
        "reduction" => reduction_suite(seed, trials.unwrap_or(20_000)),
        "binary-test" => binary_test_suite(),
        other => Err(bounds_core::Error::Config(format!(
            "unknown verify suite {other:?}; known: {SUITE_NAMES:?} or `all`"
        ))),
    }
}

// -------------------------------------------------------------------------
// 1. Subgaussian tail bounds and the Gaussian tail sandwich.
// -------------------------------------------------------------------------

fn tails_suite(seed: u64, trials: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    let sources = [
        ("gaussian", SourceDist::Gaussian { mean: 0.0, sigma2: 1.0 }),
        ("rademacher", SourceDist::Rademacher),
        ("uniform01", SourceDist::Uniform { a: 0.0, b: 1.0 }),
    ];
    for (label, src) in sources {
        let spec = src.spec();
        for mult in [0.25, 0.5, 1.0, 2.0, 3.0] {
            let eps = mult * spec.sigma();
            let rep = empirical_tail_check(src, TailStatistic::Raw, eps, trials, seed)?;
            let bound = subgaussian_tail_bound(&spec, eps, TailVariant::Chernoff, 1)?;
            checks.push(
                Check::new(
                    format!("tail_freq_le_chernoff[{label},eps={mult}sigma]"),
                    rep.frequency <= bound.value + rep.hoeffding_halfwidth,
                )
                .with("frequency", rep.frequency)
                .with("bound", bound.value)
                .with("halfwidth", rep.hoeffding_halfwidth),
            );
        }
    }
    for mult in [0.5, 1.0, 2.0, 3.0, 4.0] {
        let (lower, upper) = gaussian_tail_sandwich(1.0, mult)?;
        let tail = std_normal_upper_tail(mult);
        checks.push(
            Check::new(
                format!("gaussian_sandwich_contains_tail[a={mult}sigma]"),
                lower - 1e-9 <= tail && tail <= upper + 1e-9,
            )
            .with("lower", lower)
            .with("tail", tail)
            .with("upper", upper),
        );
    }
    Ok(Suite {
        name: "tails".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 2. Exact covering/packing sandwich on binary cubes.
// -------------------------------------------------------------------------

fn covering_suite() -> Result<Suite> {
    let mut checks = Vec::new();
    const COVER_BUDGET: u64 = 12_000_000;
    const PACK_BUDGET: u64 = 2_000_000_000;
    for n in 1..=8u32 {
        let cube = FiniteMetricSpace::hamming_cube(n)?;
        let points = cube.len();
        for delta in [1u32, 2, 3] {
            if delta >= n {
                continue;
            }
            let d = delta as f64;
            let m_delta = exact_packing_number_budgeted(&cube, d, points, PACK_BUDGET)?;
            let m_2delta = exact_packing_number_budgeted(&cube, 2.0 * d, points, PACK_BUDGET)?;
            let cover = covering_number_with_budget(&cube, d, points, COVER_BUDGET)?;
            // Sandwich M(2 delta) <= N(delta) <= M(delta); when the cover
            // search returns a certified bracket, the inequalities are
            // checked over the whole bracket.
            let (n_low, n_high, exact) = match cover {
                CoverOutcome::Exact(v) => (v, v, 1.0),
                CoverOutcome::Bracketed { lower, upper } => (lower, upper, 0.0),
            };
            checks.push(
                Check::new(
                    format!("sandwich[n={n},delta={delta}]"),
                    m_2delta <= n_low && n_high <= m_delta,
                )
                .with("m_2delta", m_2delta as f64)
                .with("n_lower", n_low as f64)
                .with("n_upper", n_high as f64)
                .with("m_delta", m_delta as f64)
                .with("exact", exact),
            );
            if (delta as f64) < n as f64 / 2.0 {
                let bounds = analytic_entropy_bounds(EntropyFamily::HammingCube { n }, d)?;
                let h_low = (n_low as f64).log2();
                let h_high = (n_high as f64).log2();
                checks.push(
                    Check::new(
                        format!("analytic_bounds[n={n},delta={delta}]"),
                        bounds.lower - 1e-9 <= h_low && h_high <= bounds.upper + 1e-9,
                    )
                    .with("analytic_lower", bounds.lower)
                    .with("log2_n_lower", h_low)
                    .with("log2_n_upper", h_high)
                    .with("analytic_upper", bounds.upper),
                );
            }
        }
    }
    Ok(Suite {
        name: "covering".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 3. Rate-distortion comparison for the binary symmetric source.
// -------------------------------------------------------------------------

fn rd_suite() -> Result<Suite> {
    let mut checks = Vec::new();
    let d = 0.11;
    let mut comparisons = Vec::new();
    for n in [20u64, 40, 60] {
        let c = rd_compare(RdSource::BinarySymmetric, d, n)?;
        checks.push(
            Check::new(
                format!("rate_below_exact_interval[n={n}]"),
                c.rd_value <= c.per_dim_lower + 1e-12 && c.per_dim_lower <= c.per_dim_upper,
            )
            .with("rate", c.rd_value)
            .with("per_dim_lower", c.per_dim_lower)
            .with("per_dim_upper", c.per_dim_upper),
        );
        comparisons.push(c);
    }
    checks.push(
        Check::new(
            "width_shrinks[n=60 vs n=20]",
            comparisons[2].width() < comparisons[0].width(),
        )
        .with("width_20", comparisons[0].width())
        .with("width_60", comparisons[2].width()),
    );
    checks.push(
        Check::new(
            "lower_converges_to_rate",
            comparisons[2].per_dim_lower < comparisons[1].per_dim_lower
                && comparisons[1].per_dim_lower < comparisons[0].per_dim_lower,
        )
        .with("lower_20", comparisons[0].per_dim_lower)
        .with("lower_40", comparisons[1].per_dim_lower)
        .with("lower_60", comparisons[2].per_dim_lower),
    );
    Ok(Suite {
        name: "rd".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 4. Lipschitz sign-pattern packing.
// -------------------------------------------------------------------------

fn lipschitz_suite(seed: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    for delta in [0.5, 0.25] {
        let family = lipschitz_packing_family(1.0, delta, seed)?;
        let m = (1.0f64 / delta).floor() as u32;
        checks.push(
            Check::new(
                format!("family_size[delta={delta}]"),
                family.len() == 1usize << m,
            )
            .with("size", family.len() as f64)
            .with("expected", (1usize << m) as f64),
        );
        let mut min_dist = f64::INFINITY;
        for i in 0..family.len() {
            for j in (i + 1)..family.len() {
                min_dist = min_dist.min(sup_distance(&family[i], &family[j]));
            }
        }
        checks.push(
            Check::new(
                format!("pairwise_separation[delta={delta}]"),
                min_dist >= 2.0 * delta - 1e-12,
            )
            .with("min_sup_distance", min_dist)
            .with("required", 2.0 * delta),
        );
        let zero_ok = family
            .iter()
            .all(|f| f.values_at_breakpoints()[0] == 0.0);
        checks.push(Check::new(format!("members_vanish_at_zero[delta={delta}]"), zero_ok));
    }
    Ok(Suite {
        name: "lipschitz".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 5. Rademacher complexity: exact vs Monte Carlo, and symmetrization.
// -------------------------------------------------------------------------

fn rademacher_suite(seed: u64, trials: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    let problem = FiniteProblem::evenly_spaced(4)?;
    let n = 10u64;
    let mut rng = stream_rng(seed, 1);
    let data = problem.sample_dataset(n, &mut rng);
    let loss = problem.loss_matrix(&data);
    let exact = rademacher_exact(&loss)?;
    let mc = rademacher_mc(&loss, trials, derive_seed(seed, 2))?;
    checks.push(
        Check::new(
            "mc_matches_exact_within_3se",
            (mc.mean - exact).abs() <= 3.0 * mc.std_error,
        )
        .with("exact", exact)
        .with("mc", mc.mean)
        .with("se", mc.std_error),
    );
    // Symmetrization over 500 dataset draws: E(gap) <= 2 E(radem) + 3 SE.
    let draws = 500u64;
    let mut gap_stats = OnlineStats::default();
    let mut rad_stats = OnlineStats::default();
    let mut draw_rng = stream_rng(seed, 3);
    for _ in 0..draws {
        let data = problem.sample_dataset(n, &mut draw_rng);
        gap_stats.push(problem.worst_gap(&data));
        rad_stats.push(rademacher_exact(&problem.loss_matrix(&data))?);
    }
    let combined = gap_stats.std_error() + 2.0 * rad_stats.std_error();
    checks.push(
        Check::new(
            "symmetrization_gap_le_2_rademacher",
            gap_stats.mean() <= 2.0 * rad_stats.mean() + 3.0 * combined,
        )
        .with("gap", gap_stats.mean())
        .with("rademacher", rad_stats.mean())
        .with("combined_se", combined),
    );
    Ok(Suite {
        name: "rademacher".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 6. Finite-class bound domination and sqrt(n) scaling.
// -------------------------------------------------------------------------

fn finite_class_suite(seed: u64, trials: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    let problem = FiniteProblem::evenly_spaced(16)?;
    let sigma2 = 0.25;
    let mut gaps = Vec::new();
    for n in [25u64, 100, 400] {
        let est = worst_case_gap_mc(&problem, n, trials, derive_seed(seed, n))?;
        let bound = finite_class_bound(sigma2, 16, n)?;
        checks.push(
            Check::new(
                format!("gap_le_bound[n={n}]"),
                est.mean <= bound.value + 3.0 * est.std_error,
            )
            .with("gap", est.mean)
            .with("bound", bound.value)
            .with("se", est.std_error),
        );
        gaps.push(est.mean);
    }
    for (i, pair) in gaps.windows(2).enumerate() {
        let ratio = pair[1] / pair[0];
        checks.push(
            Check::new(
                format!("quadrupling_halves_gap[step={i}]"),
                (0.4..=0.6).contains(&ratio),
            )
            .with("ratio", ratio),
        );
    }
    Ok(Suite {
        name: "finite-class".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 7. VC certificate and Sauer domination for planar halfspaces.
// -------------------------------------------------------------------------

fn vc_suite(seed: u64) -> Result<Suite> {
    use rand::Rng;
    use rand_distr::StandardNormal;
    let mut checks = Vec::new();
    // Homogeneous halfspaces of the plane under the bias-free convention.
    let sampler = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        vec![rng.sample(StandardNormal), rng.sample(StandardNormal)]
    };
    let cert = vc_dimension_search(sampler, 4, 24, seed)?;
    checks.push(
        Check::new("halfspace_certificate_is_two", cert.lower_bound == 2)
            .with("certificate", cert.lower_bound as f64),
    );
    let d = 2u64;
    let mut rng = stream_rng(seed, 101);
    for n in 3..=10usize {
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| vec![rng.sample(StandardNormal), rng.sample(StandardNormal)])
            .collect();
        let (count, _) = shatter_coefficient_halfspaces(&points)?;
        let sauer = sauer_bound(d, n as u64)?;
        checks.push(
            Check::new(
                format!("shatter_le_sauer[n={n}]"),
                (count as f64) <= sauer + 1e-9,
            )
            .with("shatter", count as f64)
            .with("sauer", sauer),
        );
    }
    Ok(Suite {
        name: "vc".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 8. Gibbs algorithm: stability, information, generalization, MCMC.
// -------------------------------------------------------------------------

fn gibbs_suite(seed: u64, trials: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    let inst = FiniteInstance::binary_default();
    let betas = [0.5, 1.0, 2.0, 5.0, 10.0];
    let n_exact = 10u64;
    for &beta in &betas {
        let learner = gibbs_learner(&inst, beta)?;
        // Exact single-coordinate posterior stability over every dataset.
        let worst = neighbor_posterior_kl_max(&inst, &learner, n_exact)?;
        let stability_bound = beta * beta / (2.0 * (n_exact as f64).powi(2));
        checks.push(
            Check::new(
                format!("neighbor_kl_le_beta2_over_2n2[beta={beta}]"),
                worst <= stability_bound + 1e-12,
            )
            .with("worst_kl", worst)
            .with("bound", stability_bound),
        );
        // Exact mutual information against beta^2 / 2n.
        let mi = exact_mutual_information(&inst, &learner, n_exact)?;
        let mi_bound = beta * beta / (2.0 * n_exact as f64);
        checks.push(
            Check::new(
                format!("exact_mi_le_beta2_over_2n[beta={beta}]"),
                mi.joint_nats <= mi_bound + 1e-12,
            )
            .with("mi_nats", mi.joint_nats)
            .with("bound", mi_bound),
        );
        // Monte Carlo generalization against beta / 2n.
        for n in [10u64, 50] {
            let est = mc_expected_generalization(
                &inst,
                &learner,
                n,
                trials,
                derive_seed(seed, beta.to_bits() ^ n),
            )?;
            let bound = gibbs_gen_bound(beta, n)?;
            checks.push(
                Check::new(
                    format!("mc_gen_le_beta_over_2n[beta={beta},n={n}]"),
                    est.mean.abs() <= bound + 3.0 * est.std_error,
                )
                .with("gen", est.mean)
                .with("bound", bound)
                .with("se", est.std_error),
            );
        }
    }
    // beta = 0 returns the prior exactly.
    let mut rng = stream_rng(seed, 77);
    let data = inst.sample_dataset(12, &mut rng);
    let posterior = gibbs_finite(&inst, 0.0, &data)?;
    let max_dev = posterior
        .iter()
        .zip(inst.prior())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0f64, f64::max);
    checks.push(
        Check::new("beta_zero_posterior_equals_prior", max_dev < 1e-12).with("max_dev", max_dev),
    );
    // MCMC moments against the Gaussian closed form.
    let beta = 2.0;
    let dim = 2usize;
    let mut data_rng = stream_rng(seed, 78);
    let points: Vec<Vec<f64>> = (0..16)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    use rand::Rng;
                    data_rng.sample::<f64, _>(rand_distr::StandardNormal)
                })
                .collect()
        })
        .collect();
    let closed = gibbs_gaussian_mean(beta, &points)?;
    let nref = points.len() as f64;
    let log_target = move |w: &[f64]| -> f64 {
        let emp: f64 = points
            .iter()
            .map(|z| {
                w.iter()
                    .zip(z)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
            })
            .sum::<f64>()
            / nref;
        -beta * emp - 0.5 * w.iter().map(|v| v * v).sum::<f64>()
    };
    let run = bounds_core::infogen::metropolis_sample(
        log_target,
        &McmcConfig {
            dim,
            beta,
            burn_in: 4_000,
            samples: 60_000,
            thin: 2,
            seed: derive_seed(seed, 79),
        },
    )?;
    for k in 0..dim {
        checks.push(
            Check::new(
                format!("mcmc_mean_matches_closed_form[dim={k}]"),
                (run.mean[k] - closed.mean[k]).abs() <= 3.0 * run.mean_std_error[k],
            )
            .with("mcmc", run.mean[k])
            .with("closed", closed.mean[k])
            .with("se", run.mean_std_error[k]),
        );
        checks.push(
            Check::new(
                format!("mcmc_variance_matches_closed_form[dim={k}]"),
                (run.variance[k] - closed.variance).abs() <= 3.0 * run.variance_std_error[k],
            )
            .with("mcmc", run.variance[k])
            .with("closed", closed.variance)
            .with("se", run.variance_std_error[k]),
        );
    }
    checks.push(
        Check::new(
            "mcmc_acceptance_in_tuned_band",
            (0.15..=0.65).contains(&run.diagnostics.acceptance_rate),
        )
        .with("acceptance", run.diagnostics.acceptance_rate),
    );
    Ok(Suite {
        name: "gibbs".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 9. Mutual-information generalization bounds with exact oracles.
// -------------------------------------------------------------------------

fn mi_suite(seed: u64, trials: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    let inst = FiniteInstance::binary_default();
    let sigma2 = 0.25; // losses live in [0,1]
    let n = 8u64;
    let learners = [
        ("gibbs", gibbs_learner(&inst, 3.0)?),
        ("argmin", argmin_learner(&inst)),
    ];
    for (label, learner) in &learners {
        let mi = exact_mutual_information(&inst, learner, n)?;
        let bound = mi_gen_bound(sigma2, n, &MiBoundSource::Mi { nats: mi.joint_nats })?;
        let est = mc_expected_generalization(&inst, learner, n, trials, derive_seed(seed, 11))?;
        checks.push(
            Check::new(
                format!("mi_bound_dominates_mc_gen[{label}]"),
                est.mean.abs() <= bound.value + 3.0 * est.std_error,
            )
            .with("gen", est.mean)
            .with("bound", bound.value)
            .with("mi_nats", mi.joint_nats),
        );
        // Individual route is never looser than the joint route.
        let individual = mi_gen_bound(
            sigma2,
            n,
            &MiBoundSource::Individual {
                nats: mi.per_sample_nats.clone(),
            },
        )?;
        checks.push(
            Check::new(
                format!("individual_le_joint_bound[{label}]"),
                individual.value <= bound.value + 1e-12,
            )
            .with("individual", individual.value)
            .with("joint", bound.value),
        );
    }
    // Gaussian-mean per-sample information against the binned plug-in.
    let (exact, _) = gaussian_mean_individual_mi(2, 1.0)?;
    let pairs = simulate_mean_pairs(2, 1.0, 1_000_000, derive_seed(seed, 12));
    let plugin = plugin_mi_binned(&pairs)?;
    checks.push(
        Check::new(
            "plugin_mi_matches_closed_form_at_n2",
            (plugin - exact).abs() < 0.02,
        )
        .with("plugin", plugin)
        .with("exact", exact),
    );
    Ok(Suite {
        name: "mi".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 10. PAC-Bayes coverage.
// -------------------------------------------------------------------------

fn pac_bayes_suite(seed: u64) -> Result<Suite> {
    let inst = FiniteInstance::binary_default();
    let delta = 0.1;
    let coverage = pac_bayes_coverage(&inst, 4.0, 30, 0.25, delta, 2_000, seed)?;
    let check = Check::new(
        "coverage_at_delta_0.1",
        coverage >= 1.0 - delta - 0.02,
    )
    .with("coverage", coverage)
    .with("required", 1.0 - delta - 0.02);
    Ok(Suite {
        name: "pac-bayes".into(),
        checks: vec![check],
    })
}

// -------------------------------------------------------------------------
// 11. Gaussian-mean Fano pipeline.
// -------------------------------------------------------------------------

fn gauss_fano_suite(seed: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    let log2e = std::f64::consts::LOG2_E;
    for (k, n, sigma2) in [(30usize, 100u64, 1.0), (3, 1, 1.0), (10, 10_000, 4.0)] {
        let out = gaussian_mean_pipeline(k, n, sigma2, seed)?;
        let expected = sigma2 * k as f64 / (384.0 * n as f64 * log2e);
        checks.push(
            Check::new(
                format!("pipeline_value_exact[k={k},n={n}]"),
                (out.report.lower_bound - expected).abs() <= 1e-12,
            )
            .with("value", out.report.lower_bound)
            .with("expected", expected),
        );
        checks.push(
            Check::new(
                format!("lower_le_sample_mean_reference[k={k},n={n}]"),
                out.report.lower_bound <= out.reference.sample_mean_risk,
            )
            .with("lower", out.report.lower_bound)
            .with("reference", out.reference.sample_mean_risk),
        );
    }
    for k in [3usize, 8, 12] {
        let out = gaussian_mean_pipeline(k, 100, 1.0, seed)?;
        checks.push(
            Check::new(
                format!("packing_certificate[k={k}]"),
                out.packing_certified && out.packing_log2_size >= k as f64,
            )
            .with("log2_size", out.packing_log2_size),
        );
    }
    Ok(Suite {
        name: "gauss-fano".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 12. Density-estimation construction.
// -------------------------------------------------------------------------

fn density_suite(seed: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    let a = density_packing_pipeline(8, None, 32_768, LossShape::Square, seed)?;
    checks.push(
        Check::new("halving_search_found_c1", a.audit.c1_from_search && a.audit.c1 > 0.0)
            .with("c1", a.audit.c1),
    );
    checks.push(
        Check::new("membership_and_normalization", a.audit.membership_ok)
            .with("max_integral_error", a.audit.max_integral_error),
    );
    checks.push(
        Check::new("hellinger_separation", a.audit.hellinger_ok)
            .with("hellinger_min", a.audit.hellinger_min)
            .with("delta_sq", a.audit.delta_sq),
    );
    checks.push(
        Check::new("kl_upper_bound", a.audit.kl_ok)
            .with("kl_max_bits", a.audit.kl_max_bits)
            .with("kl_bound_bits", a.audit.kl_bound_bits),
    );
    checks.push(
        Check::new("fano_ratio_le_half", a.audit.ratio_ok).with("ratio", a.audit.ratio),
    );
    // Power law at fixed implied C2 = 1: (8, 8^5) against (16, 16^5).
    let b = density_packing_pipeline(16, None, 1_048_576, LossShape::Square, seed)?;
    let measured = b.report.lower_bound / a.report.lower_bound;
    let law = (1_048_576f64 / 32_768.0).powf(-0.8);
    checks.push(
        Check::new(
            "n_power_law_minus_four_fifths",
            a.audit.ratio_ok
                && b.audit.ratio_ok
                && a.audit.c1 == b.audit.c1
                && (measured / law - 1.0).abs() < 1e-6,
        )
        .with("measured_ratio", measured)
        .with("power_law", law)
        .with("implied_c2_a", a.audit.implied_c2)
        .with("implied_c2_b", b.audit.implied_c2),
    );
    Ok(Suite {
        name: "density".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 13. Estimation-to-testing reduction simulation.
// -------------------------------------------------------------------------

fn reduction_suite(seed: u64, trials: u64) -> Result<Suite> {
    let mut checks = Vec::new();
    // The k = 3 Gaussian instance built from the pipeline's own packing.
    let pipeline = gaussian_mean_pipeline(3, 1, 1.0, seed)?;
    let mut errors = Vec::new();
    for n in [1u64, 10, 100] {
        let inst = FanoInstance::gaussian_location(pipeline.packing.clone(), 1.0, n)?;
        let rep = testing_reduction_sim(
            &inst,
            ReductionEstimator::SampleMean,
            trials,
            derive_seed(seed, 200 + n),
        )?;
        checks.push(
            Check::new(
                format!("error_le_miss_direction[n={n}]"),
                rep.direction_holds,
            )
            .with("error", rep.error_freq)
            .with("miss", rep.miss_freq),
        );
        errors.push((rep.error_freq, rep.error_se));
    }
    let slack = 3.0 * (errors[0].1 + errors[1].1 + errors[2].1);
    checks.push(
        Check::new(
            "error_decreases_with_n",
            errors[0].0 + slack >= errors[1].0 && errors[1].0 + slack >= errors[2].0,
        )
        .with("err_1", errors[0].0)
        .with("err_10", errors[1].0)
        .with("err_100", errors[2].0),
    );
    let inst = FanoInstance::gaussian_location(pipeline.packing.clone(), 1.0, 10)?;
    let m = inst.hypotheses() as f64;
    let rep = testing_reduction_sim(
        &inst,
        ReductionEstimator::Constant,
        trials,
        derive_seed(seed, 210),
    )?;
    checks.push(
        Check::new(
            "constant_estimator_errs_m_minus_1_over_m",
            (rep.error_freq - (m - 1.0) / m).abs() <= 3.0 * rep.error_se.max(1e-4),
        )
        .with("error", rep.error_freq)
        .with("expected", (m - 1.0) / m),
    );
    Ok(Suite {
        name: "reduction".into(),
        checks,
    })
}

// -------------------------------------------------------------------------
// 14. Exact binary minimax test.
// -------------------------------------------------------------------------

fn binary_test_suite() -> Result<Suite> {
    let mut checks = Vec::new();
    let r = binary_test_minimax(&[0.8, 0.2], &[0.2, 0.8], 3)?;
    let majority = 3.0 * 0.2 * 0.2 * 0.8 + 0.2f64.powi(3);
    checks.push(
        Check::new(
            "bern_0.2_0.8_n3_matches_equalized_majority",
            (r.value - majority).abs() < 1e-12 && (r.alpha - r.beta).abs() < 1e-12,
        )
        .with("value", r.value)
        .with("majority", majority)
        .with("alpha", r.alpha)
        .with("beta", r.beta),
    );
    // Oracle: no deterministic test over the 8 outcomes does better.
    let mut best_det = f64::INFINITY;
    let outcomes: Vec<(f64, f64)> = (0..8u32)
        .map(|x| {
            let bits = [(x & 1), (x >> 1) & 1, (x >> 2) & 1];
            let q0: f64 = bits.iter().map(|&b| if b == 1 { 0.2 } else { 0.8 }).product();
            let q1: f64 = bits.iter().map(|&b| if b == 1 { 0.8 } else { 0.2 }).product();
            (q0, q1)
        })
        .collect();
    for mask in 0u32..256 {
        let mut alpha = 0.0f64;
        let mut beta = 0.0f64;
        for (i, &(q0, q1)) in outcomes.iter().enumerate() {
            if (mask >> i) & 1 == 1 {
                alpha += q0;
            } else {
                beta += q1;
            }
        }
        best_det = best_det.min(alpha.max(beta));
    }
    checks.push(
        Check::new(
            "sweep_not_beaten_by_exhaustive_deterministic_tests",
            r.value <= best_det + 1e-12,
        )
        .with("sweep", r.value)
        .with("best_deterministic", best_det),
    );
    let tie = binary_test_minimax(&[0.5, 0.5], &[0.5, 0.5], 3)?;
    checks.push(
        Check::new("identical_hypotheses_give_one_half", (tie.value - 0.5).abs() < 1e-12)
            .with("value", tie.value),
    );
    Ok(Suite {
        name: "binary-test".into(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_suites_pass_and_are_deterministic() {
        for name in ["lipschitz", "rd", "binary-test"] {
            let a = run_suite(name, 7, None).unwrap();
            assert!(a.passed(), "suite {name}: {:?}", a.failures());
            let b = run_suite(name, 7, None).unwrap();
            assert_eq!(
                serde_json::to_string(&a.to_results_json()).unwrap(),
                serde_json::to_string(&b.to_results_json()).unwrap()
            );
        }
    }

    #[test]
    fn unknown_suite_is_a_config_error() {
        assert!(matches!(
            run_suite("nope", 0, None),
            Err(bounds_core::Error::Config(_))
        ));
    }
}
