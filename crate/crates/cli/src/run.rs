//! Command definitions and the dispatcher from parsed arguments to module
//! operations and reports.

use crate::config::{load_file, resolve, CommonOpts};
use crate::report::{sum_tagged, Report, Tagged};
use crate::verify::{run_suite, Suite, SUITE_NAMES};
use bounds_core::concentration::{
    empirical_tail_check, gaussian_tail_sandwich, hoeffding_inequality, hoeffding_proxy,
    maximal_bounds, square_mgf_bound, subgaussian_tail_bound, MaximalKind, RangeProxy,
    SourceDist, SubgaussianSpec, TailStatistic, TailVariant,
};
use bounds_core::entropy::{
    analytic_entropy_bounds, covering_number_with_budget, exact_packing_number_budgeted,
    greedy_net, gv_hypercube_packing, lipschitz_packing_family, random_net_hamming, rd_compare,
    sup_distance, CoverOutcome, EntropyFamily, FiniteMetricSpace, RdSource,
};
use bounds_core::infogen::{
    dv_variational_check, exact_mutual_information, gaussian_mean_individual_mi, gibbs_finite,
    gibbs_gaussian_mean, gibbs_gen_bound, gibbs_learner, gibbs_risk_overhead,
    kl_posterior_prior_finite, log_partition_finite, metropolis_sample, pac_bayes_bound,
    plugin_mi_binned, simulate_mean_pairs, FiniteInstance, McmcConfig,
};
use bounds_core::learning::{
    finite_class_bound, linreg_bounded_dataset, linreg_rademacher_bound, rademacher_exact,
    rademacher_mc, sauer_bound, vc_dimension_search, vc_gen_bound, worst_case_gap_mc,
    FiniteProblem,
};
use bounds_core::minimax::{
    binary_test_minimax, density_packing_pipeline, fano_error_lower, gaussian_mean_pipeline,
    global_fano_bound, local_fano_bound, nonlinear_regression_pipeline, testing_reduction_sim,
    FanoInstance, LossShape, ReductionEstimator,
};
use bounds_core::rng::stream_rng;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "bounds",
    version,
    about = "Workbench for learning-theoretic bounds: concentration, metric entropy, generalization, and minimax limits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Root seed for all randomized operations (default: BOUNDS_SEED or 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Trial count override for Monte Carlo operations.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Write the flat CSV export to this path.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Merge defaults from a JSON config file (flags take precedence).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Present information quantities in this base (bits or nats).
    #[arg(long, global = true)]
    pub base: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subgaussian tail bounds and Monte Carlo tail checks.
    #[command(subcommand)]
    Concentration(ConcentrationCmd),
    /// Covering, packing, and metric entropy.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Generalization bounds and VC machinery.
    #[command(subcommand)]
    Learn(LearnCmd),
    /// Mutual-information, Gibbs, and PAC-Bayes bounds.
    #[command(subcommand)]
    Infogen(InfogenCmd),
    /// Fano-based minimax lower bounds.
    #[command(subcommand)]
    Minimax(MinimaxCmd),
    /// Run a verification suite; exits 1 when any check fails.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Chernoff,
    TwoSided,
    SharpGaussian,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistArg {
    Gaussian,
    Rademacher,
    Uniform01,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MaximalArg {
    Expectation,
    ExpectationAbs,
    Tail,
}

#[derive(Debug, Subcommand)]
pub enum ConcentrationCmd {
    /// Subgaussian tail bound at a deviation.
    TailBound {
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "chernoff")]
        variant: VariantArg,
        #[arg(long, default_value_t = 1)]
        n: u64,
    },
    /// Gaussian upper-tail sandwich at threshold a.
    Sandwich {
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        a: f64,
    },
    /// Hoeffding proxy of a bounded range and the two-sided inequality for
    /// `count` i.i.d. copies.
    Hoeffding {
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long)]
        epsilon: f64,
    },
    /// Maximal inequalities for n subgaussians.
    Maximal {
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "expectation")]
        kind: MaximalArg,
    },
    /// MGF bound of the square of a subgaussian variable.
    SquareMgf {
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Empirical upper-tail frequency with a Hoeffding confidence radius.
    TailCheck {
        #[arg(long, value_enum)]
        dist: DistArg,
        #[arg(long)]
        epsilon: f64,
        /// Check the mean of this many draws instead of a single draw.
        #[arg(long)]
        mean_of: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum EntropyCmd {
    /// Hamming-cube entropy bounds, greedy net, and optional exact numbers.
    Hamming {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: u32,
        /// Run the exact covering/packing searches.
        #[arg(long)]
        exact: bool,
        /// Node budget for the exact searches.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Greedy net on a named space (hamming:n, cube2:n, euclid-grid:d:side).
    Space {
        #[arg(long)]
        name: String,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        exact: bool,
    },
    /// Analytic entropy bounds and the sign-pattern packing for Lipschitz
    /// functions on the unit interval.
    Lipschitz {
        #[arg(long)]
        l: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Randomized certified net of the Hamming cube.
    RandomNet {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: u32,
    },
    /// Rate-distortion against per-dimension metric entropy.
    Rd {
        /// gaussian or binary
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 1.0)]
        power: f64,
        #[arg(long)]
        distortion: f64,
        #[arg(long)]
        n: u64,
    },
    /// Greedy hypercube packing with the divergence size guarantee.
    GvPack {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        separation: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum LearnCmd {
    /// Finite-class worst-case generalization bound.
    FiniteBound {
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        n: u64,
    },
    /// Monte Carlo worst-case gap on the evenly spaced Bernoulli problem.
    Gap {
        #[arg(long, default_value_t = 16)]
        models: usize,
        #[arg(long)]
        n: u64,
    },
    /// Empirical Rademacher complexity (exact enumeration and Monte Carlo).
    Rademacher {
        #[arg(long, default_value_t = 4)]
        models: usize,
        #[arg(long)]
        n: u64,
    },
    /// Sauer shatter bound and the VC generalization bound.
    Vc {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    /// Certified VC lower bound for planar halfspaces by shatter search.
    VcSearch {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 24)]
        attempts: u32,
        /// Append a constant bias coordinate to the sampled points.
        #[arg(long)]
        bias: bool,
    },
    /// Empirical Rademacher bound for bounded linear regression.
    LinregBound {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 2.0)]
        b: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum InfogenCmd {
    /// Exact Gibbs posterior on the built-in finite instance.
    Gibbs {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        n: u64,
    },
    /// Exact mutual information of the Gibbs learner with its bounds.
    Mi {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        n: u64,
    },
    /// Per-sample information of the Gaussian sample mean, with the binned
    /// plug-in estimate.
    MeanMi {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
    },
    /// PAC-Bayes bound at given divergence and confidence.
    PacBayes {
        #[arg(long)]
        sigma2: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        kl: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Donsker-Varadhan variational check on two-point pmfs.
    Dv {
        /// Comma-separated pmf, e.g. 0.75,0.25
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 500)]
        samples: u64,
    },
    /// Random-walk Metropolis for the Gaussian-mean Gibbs posterior,
    /// compared with the closed form.
    Mcmc {
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 40_000)]
        samples: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum MinimaxCmd {
    /// Gaussian-mean lower bound pipeline with packing certificate.
    GaussMean {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
    },
    /// Bump-density estimation lower bound with construction audit.
    Density {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c1: Option<f64>,
    },
    /// Nonlinear regression lower bound over 1-Lipschitz functions.
    Regression {
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
    },
    /// Fano error lower bound from an information value.
    Fano {
        #[arg(long)]
        information: f64,
        #[arg(long)]
        m: usize,
        /// bits or nats
        #[arg(long, default_value = "bits")]
        information_base: String,
    },
    /// Global Fano bound from covering and packing exponents.
    GlobalFano {
        #[arg(long)]
        log_k: f64,
        #[arg(long)]
        log_m: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Exact binary minimax test between two Bernoulli pmfs.
    BinaryTest {
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        n: u32,
    },
    /// Simulate the estimation-to-testing reduction on a Gaussian packing.
    Reduction {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "sample-mean")]
        estimator: EstimatorArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EstimatorArg {
    SampleMean,
    Constant,
    Oracle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

/// Dispatch a parsed command to the underlying operations and build the
/// report. Returns the report together with the exit code the caller should
/// use (0 ok, 1 for verify suites with failing checks).
pub fn dispatch(cli: &Cli) -> Result<(Report, i32), String> {
    let file = match &cli.config {
        Some(path) => Some(load_file(path)?),
        None => None,
    };
    let opts = resolve(
        cli.seed,
        cli.trials,
        cli.json.clone(),
        cli.csv.clone(),
        cli.base.clone(),
        file,
    )?;
    let outcome = run_command(&cli.command, &opts).map_err(|e| e.to_string())?;
    Ok(outcome)
}

fn parse_pmf(text: &str) -> Result<Vec<f64>, bounds_core::Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| bounds_core::Error::Config(format!("bad pmf entry {s:?}")))
        })
        .collect()
}

fn variant_of(v: VariantArg) -> TailVariant {
    match v {
        VariantArg::Chernoff => TailVariant::Chernoff,
        VariantArg::TwoSided => TailVariant::TwoSided,
        VariantArg::SharpGaussian => TailVariant::SharpGaussian,
    }
}

fn run_command(
    command: &Command,
    opts: &CommonOpts,
) -> Result<(Report, i32), bounds_core::Error> {
    let seed = opts.seed;
    let mut exit = 0;
    let (name, inputs, mut results, trials_used) = match command {
        Command::Concentration(cmd) => concentration_cmd(cmd, opts)?,
        Command::Entropy(cmd) => entropy_cmd(cmd, opts)?,
        Command::Learn(cmd) => learn_cmd(cmd, opts)?,
        Command::Infogen(cmd) => infogen_cmd(cmd, opts)?,
        Command::Minimax(cmd) => minimax_cmd(cmd, opts)?,
        Command::Verify(args) => {
            let (name, inputs, results, suites_pass) = verify_cmd(args, opts)?;
            if !suites_pass {
                exit = 1;
            }
            (name, inputs, results, opts.trials.unwrap_or(0))
        }
    };
    if let Some(base) = opts.base {
        crate::report::present_in_base(&mut results, base);
    }
    Ok((
        Report::new(&name, inputs, results, seed, trials_used),
        exit,
    ))
}

fn concentration_cmd(
    cmd: &ConcentrationCmd,
    opts: &CommonOpts,
) -> Result<(String, Value, Value, u64), bounds_core::Error> {
    let seed = opts.seed;
    Ok(match cmd {
        ConcentrationCmd::TailBound {
            sigma2,
            epsilon,
            variant,
            n,
        } => {
            let spec = SubgaussianSpec::new(0.0, *sigma2)?;
            let bound = subgaussian_tail_bound(&spec, *epsilon, variant_of(*variant), *n)?;
            (
                "concentration.tail-bound".into(),
                json!({"sigma2": sigma2, "epsilon": epsilon, "variant": format!("{variant:?}"), "n": n}),
                json!({"value": bound.value, "raw": bound.raw, "sided": bound.sided}),
                0,
            )
        }
        ConcentrationCmd::Sandwich { sigma2, a } => {
            let (lower, upper) = gaussian_tail_sandwich(*sigma2, *a)?;
            (
                "concentration.sandwich".into(),
                json!({"sigma2": sigma2, "a": a}),
                json!({"lower": lower, "upper": upper}),
                0,
            )
        }
        ConcentrationCmd::Hoeffding {
            lo,
            hi,
            count,
            epsilon,
        } => {
            let proxy = hoeffding_proxy(*lo, *hi)?;
            let ranges = vec![(*lo, *hi); *count as usize];
            let bound = hoeffding_inequality(&ranges, *epsilon)?;
            let proxy_value = match proxy {
                RangeProxy::Proxy(p) => json!(p),
                RangeProxy::DegenerateConstant => json!("degenerate_constant"),
            };
            (
                "concentration.hoeffding".into(),
                json!({"lo": lo, "hi": hi, "count": count, "epsilon": epsilon}),
                json!({"variance_proxy": proxy_value, "two_sided_bound": bound}),
                0,
            )
        }
        ConcentrationCmd::Maximal {
            sigma2,
            n,
            epsilon,
            kind,
        } => {
            let k = match kind {
                MaximalArg::Expectation => MaximalKind::Expectation,
                MaximalArg::ExpectationAbs => MaximalKind::ExpectationAbs,
                MaximalArg::Tail => MaximalKind::Tail,
            };
            let value = maximal_bounds(*sigma2, *n, *epsilon, k)?;
            (
                "concentration.maximal".into(),
                json!({"sigma2": sigma2, "n": n, "epsilon": epsilon, "kind": format!("{kind:?}")}),
                json!({"value": value}),
                0,
            )
        }
        ConcentrationCmd::SquareMgf { sigma2, lambda } => {
            let value = square_mgf_bound(*sigma2, *lambda)?;
            (
                "concentration.square-mgf".into(),
                json!({"sigma2": sigma2, "lambda": lambda}),
                json!({"value": value}),
                0,
            )
        }
        ConcentrationCmd::TailCheck {
            dist,
            epsilon,
            mean_of,
        } => {
            let trials = opts.trials.unwrap_or(1_000_000);
            let src = match dist {
                DistArg::Gaussian => SourceDist::Gaussian { mean: 0.0, sigma2: 1.0 },
                DistArg::Rademacher => SourceDist::Rademacher,
                DistArg::Uniform01 => SourceDist::Uniform { a: 0.0, b: 1.0 },
            };
            let stat = match mean_of {
                Some(n) => TailStatistic::SampleMean { n: *n },
                None => TailStatistic::Raw,
            };
            let rep = empirical_tail_check(src, stat, *epsilon, trials, seed)?;
            let spec = src.spec();
            let bound =
                subgaussian_tail_bound(&spec, *epsilon, TailVariant::Chernoff, mean_of.unwrap_or(1))?;
            (
                "concentration.tail-check".into(),
                json!({"dist": format!("{dist:?}"), "epsilon": epsilon, "mean_of": mean_of, "trials": trials}),
                json!({
                    "frequency": rep.frequency,
                    "hits": rep.hits,
                    "hoeffding_halfwidth": rep.hoeffding_halfwidth,
                    "chernoff_bound": bound.value,
                    "within_bound": rep.frequency <= bound.value + rep.hoeffding_halfwidth,
                }),
                trials,
            )
        }
    })
}

fn entropy_cmd(
    cmd: &EntropyCmd,
    opts: &CommonOpts,
) -> Result<(String, Value, Value, u64), bounds_core::Error> {
    let seed = opts.seed;
    Ok(match cmd {
        EntropyCmd::Hamming {
            n,
            delta,
            exact,
            budget,
        } => {
            let cube = FiniteMetricSpace::hamming_cube(*n)?;
            let bounds = analytic_entropy_bounds(EntropyFamily::HammingCube { n: *n }, *delta as f64)?;
            let net = greedy_net(&cube, *delta as f64)?;
            let mut results = json!({
                "analytic": {
                    "lower": {"value": bounds.lower, "base": "two"},
                    "upper": {"value": bounds.upper, "base": "two"},
                },
                "greedy_net_size": net.centers.len(),
                "greedy_certified_cover": net.certified_cover,
            });
            if *exact {
                let d = *delta as f64;
                let points = cube.len();
                let cover = covering_number_with_budget(&cube, d, points, *budget)?;
                let m1 = exact_packing_number_budgeted(&cube, d, points, *budget)?;
                let m2 = exact_packing_number_budgeted(&cube, 2.0 * d, points, *budget)?;
                let (n_low, n_high) = match cover {
                    CoverOutcome::Exact(v) => (v, v),
                    CoverOutcome::Bracketed { lower, upper } => (lower, upper),
                };
                results["exact"] = json!({
                    "covering_lower": n_low,
                    "covering_upper": n_high,
                    "covering_exact": matches!(cover, CoverOutcome::Exact(_)),
                    "packing": m1,
                    "packing_2delta": m2,
                    "sandwich_holds": m2 <= n_low && n_high <= m1,
                });
            }
            (
                "entropy.hamming".into(),
                json!({"n": n, "delta": delta, "exact": exact}),
                results,
                0,
            )
        }
        EntropyCmd::Space { name, delta, exact } => {
            let space = FiniteMetricSpace::parse_name(name)?;
            let net = greedy_net(&space, *delta)?;
            let mut results = json!({
                "points": space.len(),
                "greedy_net": {"size": net.centers.len(), "certified_cover": net.certified_cover, "centers": net.centers},
            });
            if *exact {
                let points = space.len();
                let cover = covering_number_with_budget(&space, *delta, points.min(256), 50_000_000)?;
                let m = exact_packing_number_budgeted(&space, *delta, points.min(256), 500_000_000)?;
                let (n_low, n_high) = match cover {
                    CoverOutcome::Exact(v) => (v, v),
                    CoverOutcome::Bracketed { lower, upper } => (lower, upper),
                };
                results["exact"] = json!({"covering_lower": n_low, "covering_upper": n_high, "packing": m});
            }
            (
                "entropy.space".into(),
                json!({"name": name, "delta": delta, "exact": exact}),
                results,
                0,
            )
        }
        EntropyCmd::Lipschitz { l, delta } => {
            let bounds = analytic_entropy_bounds(EntropyFamily::Lipschitz { l: *l }, *delta)?;
            let family = lipschitz_packing_family(*l, *delta, seed)?;
            let mut min_dist = f64::INFINITY;
            for i in 0..family.len().min(64) {
                for j in (i + 1)..family.len().min(64) {
                    min_dist = min_dist.min(sup_distance(&family[i], &family[j]));
                }
            }
            (
                "entropy.lipschitz".into(),
                json!({"l": l, "delta": delta}),
                json!({
                    "analytic": {
                        "lower": {"value": bounds.lower, "base": "two"},
                        "upper": {"value": bounds.upper, "base": "two"},
                    },
                    "family_size": family.len(),
                    "min_pairwise_sup_distance": min_dist,
                    "required_separation": 2.0 * delta,
                }),
                0,
            )
        }
        EntropyCmd::RandomNet { n, delta } => {
            let net = random_net_hamming(*n, *delta, seed)?;
            (
                "entropy.random-net".into(),
                json!({"n": n, "delta": delta}),
                json!({"centers": net.centers.len(), "certified_cover": net.certified_cover}),
                0,
            )
        }
        EntropyCmd::Rd {
            source,
            power,
            distortion,
            n,
        } => {
            let src = match source.as_str() {
                "gaussian" => RdSource::Gaussian { power: *power },
                "binary" => RdSource::BinarySymmetric,
                other => {
                    return Err(bounds_core::Error::Config(format!(
                        "unknown rd source {other:?}; expected gaussian or binary"
                    )))
                }
            };
            let c = rd_compare(src, *distortion, *n)?;
            (
                "entropy.rd".into(),
                json!({"source": source, "power": power, "distortion": distortion, "n": n}),
                json!({
                    "rd_value": {"value": c.rd_value, "base": "two"},
                    "per_dim_lower": {"value": c.per_dim_lower, "base": "two"},
                    "per_dim_upper": {"value": c.per_dim_upper, "base": "two"},
                    "rounded_delta": c.rounded_delta,
                }),
                0,
            )
        }
        EntropyCmd::GvPack { k, separation } => {
            let rep = gv_hypercube_packing(*k, *separation, seed)?;
            (
                "entropy.gv-pack".into(),
                json!({"k": k, "separation": separation}),
                json!({
                    "members": rep.packing.members.len(),
                    "log2_size": {"value": rep.log2_size, "base": "two"},
                    "guarantee": {"value": rep.guarantee_bits, "base": "two"},
                    "certified": rep.certified,
                    "attempts": rep.attempts,
                }),
                0,
            )
        }
    })
}

fn learn_cmd(
    cmd: &LearnCmd,
    opts: &CommonOpts,
) -> Result<(String, Value, Value, u64), bounds_core::Error> {
    let seed = opts.seed;
    Ok(match cmd {
        LearnCmd::FiniteBound { sigma2, size, n } => {
            let rep = finite_class_bound(*sigma2, *size, *n)?;
            (
                "learn.finite-bound".into(),
                json!({"sigma2": sigma2, "size": size, "n": n}),
                json!({"value": rep.value, "log_base": rep.log_base}),
                0,
            )
        }
        LearnCmd::Gap { models, n } => {
            let trials = opts.trials.unwrap_or(4_000);
            let problem = FiniteProblem::evenly_spaced(*models)?;
            let est = worst_case_gap_mc(&problem, *n, trials, seed)?;
            let bound = finite_class_bound(0.25, *models, *n)?;
            (
                "learn.gap".into(),
                json!({"models": models, "n": n, "trials": trials}),
                json!({
                    "gap_estimate": est.mean,
                    "std_error": est.std_error,
                    "finite_class_bound": bound.value,
                    "within_bound": est.mean <= bound.value + 3.0 * est.std_error,
                }),
                trials,
            )
        }
        LearnCmd::Rademacher { models, n } => {
            let trials = opts.trials.unwrap_or(100_000);
            let problem = FiniteProblem::evenly_spaced(*models)?;
            let mut rng = stream_rng(seed, 1);
            let data = problem.sample_dataset(*n, &mut rng);
            let loss = problem.loss_matrix(&data);
            let exact = rademacher_exact(&loss)?;
            let mc = rademacher_mc(&loss, trials, seed)?;
            (
                "learn.rademacher".into(),
                json!({"models": models, "n": n, "trials": trials}),
                json!({
                    "exact": exact,
                    "mc": mc.mean,
                    "mc_std_error": mc.std_error,
                    "agree_within_3se": (mc.mean - exact).abs() <= 3.0 * mc.std_error,
                }),
                trials,
            )
        }
        LearnCmd::Vc { d, n, c } => {
            let sauer = sauer_bound(*d, *n)?;
            let bound = vc_gen_bound(*d, *n, *c)?;
            (
                "learn.vc".into(),
                json!({"d": d, "n": n, "c": c}),
                json!({"sauer": sauer, "erm_excess_bound": bound, "constant_note": "universal constant left unspecified by the theory; supplied by the caller"}),
                0,
            )
        }
        LearnCmd::VcSearch {
            max_n,
            attempts,
            bias,
        } => {
            use rand::Rng;
            let with_bias = *bias;
            let sampler = move |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
                let t1: f64 = rng.sample(rand_distr::StandardNormal);
                let t2: f64 = rng.sample(rand_distr::StandardNormal);
                if with_bias {
                    vec![1.0, t1, t2]
                } else {
                    vec![t1, t2]
                }
            };
            let cert = vc_dimension_search(sampler, *max_n, *attempts, seed)?;
            (
                "learn.vc-search".into(),
                json!({"max_n": max_n, "attempts": attempts, "bias": bias}),
                json!({"lower_certificate": cert.lower_bound, "witness": cert.witness}),
                0,
            )
        }
        LearnCmd::LinregBound { n, dim, radius, b } => {
            let mut rng = stream_rng(seed, 2);
            let data = linreg_bounded_dataset(*n, *dim, 1.0, 1.0, &mut rng)?;
            let bound = linreg_rademacher_bound(&data, *radius, *b)?;
            (
                "learn.linreg-bound".into(),
                json!({"n": n, "dim": dim, "radius": radius, "b": b}),
                json!({"rademacher_bound": bound}),
                0,
            )
        }
    })
}

fn infogen_cmd(
    cmd: &InfogenCmd,
    opts: &CommonOpts,
) -> Result<(String, Value, Value, u64), bounds_core::Error> {
    let seed = opts.seed;
    Ok(match cmd {
        InfogenCmd::Gibbs { beta, n } => {
            let inst = FiniteInstance::binary_default();
            let mut rng = stream_rng(seed, 1);
            let data = inst.sample_dataset(*n, &mut rng);
            let posterior = gibbs_finite(&inst, *beta, &data)?;
            let partition = log_partition_finite(&inst, *beta, &data)?;
            let kl = kl_posterior_prior_finite(&posterior, inst.prior());
            let gen_bound = gibbs_gen_bound(*beta, *n)?;
            let overhead = gibbs_risk_overhead(0.25, 1, 4.0, *beta, *n)?;
            (
                "infogen.gibbs".into(),
                json!({"beta": beta, "n": n, "instance": "binary-default"}),
                json!({
                    "posterior": posterior,
                    "log_partition": {"value": partition, "base": "e"},
                    "kl_posterior_prior": {"value": kl, "base": "e"},
                    "gen_bound_beta_over_2n": gen_bound,
                    "risk_overhead": overhead.value,
                    "risk_overhead_log_term_negative": overhead.log_term_negative,
                }),
                0,
            )
        }
        InfogenCmd::Mi { beta, n } => {
            let inst = FiniteInstance::binary_default();
            let learner = gibbs_learner(&inst, *beta)?;
            let mi = exact_mutual_information(&inst, &learner, *n)?;
            let per_sample: Vec<Tagged> =
                mi.per_sample_nats.iter().map(|&v| Tagged::nats(v)).collect();
            let summed = sum_tagged(&per_sample)
                .map_err(bounds_core::Error::Config)?;
            let bound = bounds_core::infogen::mi_gen_bound(
                0.25,
                *n,
                &bounds_core::infogen::MiBoundSource::Mi { nats: mi.joint_nats },
            )?;
            (
                "infogen.mi".into(),
                json!({"beta": beta, "n": n, "instance": "binary-default"}),
                json!({
                    "joint": Tagged::nats(mi.joint_nats).to_json(),
                    "per_sample_sum": summed.to_json(),
                    "per_sample": mi.per_sample_nats,
                    "gen_bound": bound.value,
                }),
                0,
            )
        }
        InfogenCmd::MeanMi { n, sigma2 } => {
            let (exact, bound) = gaussian_mean_individual_mi(*n, *sigma2)?;
            let trials = opts.trials.unwrap_or(1_000_000);
            let pairs = simulate_mean_pairs(*n, *sigma2, trials, seed);
            let plugin = plugin_mi_binned(&pairs)?;
            (
                "infogen.mean-mi".into(),
                json!({"n": n, "sigma2": sigma2, "trials": trials}),
                json!({
                    "per_sample_information": Tagged::nats(exact).to_json(),
                    "individual_bound": bound,
                    "plugin_estimate": Tagged::nats(plugin).to_json(),
                    "plugin_is_estimate_not_oracle": true,
                    "joint_information_infinite": true,
                }),
                trials,
            )
        }
        InfogenCmd::PacBayes {
            sigma2,
            n,
            kl,
            delta,
        } => {
            let value = pac_bayes_bound(*sigma2, *n, *kl, *delta)?;
            (
                "infogen.pac-bayes".into(),
                json!({"sigma2": sigma2, "n": n, "kl": kl, "delta": delta}),
                json!({"bound": value}),
                0,
            )
        }
        InfogenCmd::Dv { p, q, samples } => {
            let p = parse_pmf(p)?;
            let q = parse_pmf(q)?;
            let rep = dv_variational_check(&p, &q, *samples, seed)?;
            (
                "infogen.dv".into(),
                json!({"p": p, "q": q, "samples": samples}),
                json!({
                    "kl": Tagged::nats(rep.kl_nats).to_json(),
                    "best_sampled_lower": rep.best_sampled_lower,
                    "equality_gap": rep.equality_gap,
                }),
                *samples,
            )
        }
        InfogenCmd::Mcmc { beta, dim, samples } => {
            let mut rng = stream_rng(seed, 3);
            use rand::Rng;
            let data: Vec<Vec<f64>> = (0..12)
                .map(|_| {
                    (0..*dim)
                        .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
                        .collect()
                })
                .collect();
            let closed = gibbs_gaussian_mean(*beta, &data)?;
            let nref = data.len() as f64;
            let beta_v = *beta;
            let log_target = move |w: &[f64]| -> f64 {
                let emp: f64 = data
                    .iter()
                    .map(|z| {
                        w.iter()
                            .zip(z)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                    })
                    .sum::<f64>()
                    / nref;
                -beta_v * emp - 0.5 * w.iter().map(|v| v * v).sum::<f64>()
            };
            let run = metropolis_sample(
                log_target,
                &McmcConfig {
                    dim: *dim,
                    beta: *beta,
                    burn_in: McmcConfig::min_burn_in(*dim, *beta).max(2_000),
                    samples: *samples,
                    thin: 2,
                    seed,
                },
            )?;
            (
                "infogen.mcmc".into(),
                json!({"beta": beta, "dim": dim, "samples": samples}),
                json!({
                    "mcmc_mean": run.mean,
                    "mcmc_variance": run.variance,
                    "closed_form_mean": closed.mean,
                    "closed_form_variance": closed.variance,
                    "acceptance_rate": run.diagnostics.acceptance_rate,
                    "proposal_scale": run.diagnostics.proposal_scale,
                    "ess_proxy": run.diagnostics.ess_proxy,
                }),
                *samples,
            )
        }
    })
}

fn minimax_cmd(
    cmd: &MinimaxCmd,
    opts: &CommonOpts,
) -> Result<(String, Value, Value, u64), bounds_core::Error> {
    let seed = opts.seed;
    Ok(match cmd {
        MinimaxCmd::GaussMean { k, n, sigma2 } => {
            let out = gaussian_mean_pipeline(*k, *n, *sigma2, seed)?;
            (
                "minimax.gauss-mean".into(),
                json!({"k": k, "n": n, "sigma2": sigma2}),
                json!({
                    "lower_bound": out.report.lower_bound,
                    "phi_delta": out.report.phi_delta,
                    "error_prob_lower": out.report.error_prob_lower,
                    "mi_upper": {"value": out.report.mi_upper_bits, "base": "two"},
                    "sample_mean_reference": out.reference.sample_mean_risk,
                    "bayes_gamma2": out.reference.bayes_gamma2,
                    "bayes_values": out.reference.bayes_values,
                    "packing_log2_size": out.packing_log2_size,
                    "packing_certified": out.packing_certified,
                    "parameters": out.report.parameters,
                }),
                0,
            )
        }
        MinimaxCmd::Density { k, n, c1 } => {
            let out = density_packing_pipeline(*k, *c1, *n, LossShape::Square, seed)?;
            (
                "minimax.density".into(),
                json!({"k": k, "n": n, "c1": c1}),
                json!({
                    "lower_bound": out.report.lower_bound,
                    "phi_delta": out.report.phi_delta,
                    "error_prob_lower": out.report.error_prob_lower,
                    "mi_upper": {"value": out.report.mi_upper_bits, "base": "two"},
                    "audit": serde_json::to_value(&out.audit).expect("serializable audit"),
                }),
                0,
            )
        }
        MinimaxCmd::Regression { sigma, n, c1, c2 } => {
            let out = nonlinear_regression_pipeline(*sigma, *n, *c1, *c2, LossShape::Square)?;
            (
                "minimax.regression".into(),
                json!({"sigma": sigma, "n": n, "c1": c1, "c2": c2}),
                json!({
                    "lower_bound": out.report.lower_bound,
                    "phi_delta": out.report.phi_delta,
                    "error_prob_lower": out.report.error_prob_lower,
                    "constants": serde_json::to_value(out.constants).expect("serializable constants"),
                }),
                0,
            )
        }
        MinimaxCmd::Fano {
            information,
            m,
            information_base,
        } => {
            let base = crate::config::parse_base(information_base)
                .map_err(bounds_core::Error::Config)?;
            let value = fano_error_lower(*information, *m, base)?;
            (
                "minimax.fano".into(),
                json!({"information": information, "m": m, "base": information_base}),
                json!({"error_lower": value}),
                0,
            )
        }
        MinimaxCmd::GlobalFano {
            log_k,
            log_m,
            n,
            epsilon,
            delta,
        } => {
            let rep = global_fano_bound(*log_k, *log_m, *n, *epsilon, LossShape::Square, *delta)?;
            (
                "minimax.global-fano".into(),
                json!({"log_k": log_k, "log_m": log_m, "n": n, "epsilon": epsilon, "delta": delta}),
                json!({
                    "lower_bound": rep.lower_bound,
                    "error_prob_lower": rep.error_prob_lower,
                    "phi_delta": rep.phi_delta,
                }),
                0,
            )
        }
        MinimaxCmd::BinaryTest { p0, p1, n } => {
            let r = binary_test_minimax(&[1.0 - p0, *p0], &[1.0 - p1, *p1], *n)?;
            (
                "minimax.binary-test".into(),
                json!({"p0": p0, "p1": p1, "n": n}),
                json!({
                    "value": r.value,
                    "alpha": r.alpha,
                    "beta": r.beta,
                    "full_classes": r.full_classes,
                    "gamma": r.gamma,
                }),
                0,
            )
        }
        MinimaxCmd::Reduction { k, n, estimator } => {
            let trials = opts.trials.unwrap_or(20_000);
            let pipeline = gaussian_mean_pipeline(*k, 1, 1.0, seed)?;
            let inst = FanoInstance::gaussian_location(pipeline.packing.clone(), 1.0, *n)?;
            let est = match estimator {
                EstimatorArg::SampleMean => ReductionEstimator::SampleMean,
                EstimatorArg::Constant => ReductionEstimator::Constant,
                EstimatorArg::Oracle => ReductionEstimator::Oracle,
            };
            let rep = testing_reduction_sim(&inst, est, trials, seed)?;
            // Cross-check: the packing also feeds the local Fano bound.
            let fano = local_fano_bound(&inst, LossShape::Square, inst.separation / 2.0)?;
            (
                "minimax.reduction".into(),
                json!({"k": k, "n": n, "estimator": format!("{estimator:?}"), "trials": trials}),
                json!({
                    "error_freq": rep.error_freq,
                    "error_se": rep.error_se,
                    "miss_freq": rep.miss_freq,
                    "miss_se": rep.miss_se,
                    "direction_holds": rep.direction_holds,
                    "local_fano_error_lower": fano.error_prob_lower,
                }),
                trials,
            )
        }
    })
}

fn verify_cmd(
    args: &VerifyArgs,
    opts: &CommonOpts,
) -> Result<(String, Value, Value, bool), bounds_core::Error> {
    let suites: Vec<Suite> = if args.suite == "all" {
        SUITE_NAMES
            .iter()
            .map(|name| run_suite(name, opts.seed, opts.trials))
            .collect::<Result<_, _>>()?
    } else {
        vec![run_suite(&args.suite, opts.seed, opts.trials)?]
    };
    let all_pass = suites.iter().all(|s| s.passed());
    let results = json!({
        "suites": suites.iter().map(|s| s.to_results_json()).collect::<Vec<_>>(),
        "all_passed": all_pass,
    });
    Ok((
        format!("verify.{}", args.suite),
        json!({"suite": args.suite, "trials": opts.trials}),
        results,
        all_pass,
    ))
}
