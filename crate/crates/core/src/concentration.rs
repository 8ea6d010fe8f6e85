//! Subgaussian calculus: variance-proxy algebra, tail bounds, maximal
//! inequalities, and a seeded Monte Carlo tail checker.
//!
//! A random variable X is sigma^2-subgaussian when
//! `E exp(lambda (X - EX)) <= exp(lambda^2 sigma^2 / 2)` for all real lambda.
//! Everything in this module is stated in natural logarithms.

use crate::error::{domain, Error, Result};
use crate::rng::{for_each_trial, OnlineStats};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Mean and variance proxy of a subgaussian random variable.
///
/// The proxy is the constant in the MGF condition; it need not equal the
/// variance (for bounded variables it is `(b-a)^2/4`, which can exceed it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubgaussianSpec {
    pub mean: f64,
    pub variance_proxy: f64,
}

impl SubgaussianSpec {
    pub fn new(mean: f64, variance_proxy: f64) -> Result<Self> {
        if !(variance_proxy > 0.0) {
            return Err(domain(format!(
                "variance proxy must be positive, got {variance_proxy}"
            )));
        }
        Ok(SubgaussianSpec {
            mean,
            variance_proxy,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.variance_proxy.sqrt()
    }
}

/// Which side(s) of the distribution a tail bound covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sided {
    OneSidedUpper,
    OneSidedLower,
    TwoSided,
}

/// A tail probability bound at deviation `epsilon`.
///
/// `value` is clamped to [0, 1]; `raw` keeps the unclamped expression for
/// composition into other bounds.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TailBound {
    pub epsilon: f64,
    pub value: f64,
    pub raw: f64,
    pub sided: Sided,
}

/// Variant of the subgaussian tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailVariant {
    /// One-sided Chernoff bound `exp(-n eps^2 / 2 sigma^2)`.
    Chernoff,
    /// Two-sided union bound `2 exp(-n eps^2 / 2 sigma^2)`.
    TwoSided,
    /// Mills-ratio refinement `(2 sigma / (eps sqrt(2 pi n))) exp(-n eps^2 / 2 sigma^2)`,
    /// sharp for Gaussian sample means.
    SharpGaussian,
}

/// Tail bound for a subgaussian spec; `n` scales the proxy to `sigma^2/n`
/// for sample means of n i.i.d. copies.
pub fn subgaussian_tail_bound(
    spec: &SubgaussianSpec,
    epsilon: f64,
    variant: TailVariant,
    n: u64,
) -> Result<TailBound> {
    if epsilon < 0.0 {
        return Err(domain(format!("epsilon must be >= 0, got {epsilon}")));
    }
    if n == 0 {
        return Err(domain("sample count n must be >= 1"));
    }
    let s2 = spec.variance_proxy;
    let nf = n as f64;
    let exponent = (-nf * epsilon * epsilon / (2.0 * s2)).exp();
    let (raw, sided) = match variant {
        TailVariant::Chernoff => (exponent, Sided::OneSidedUpper),
        TailVariant::TwoSided => (2.0 * exponent, Sided::TwoSided),
        TailVariant::SharpGaussian => {
            if epsilon == 0.0 {
                return Err(domain(
                    "sharp Gaussian bound is undefined at epsilon = 0 (Mills ratio divides by epsilon)",
                ));
            }
            let factor = 2.0 * spec.sigma() / (epsilon * (2.0 * PI * nf).sqrt());
            (factor * exponent, Sided::TwoSided)
        }
    };
    Ok(TailBound {
        epsilon,
        value: raw.clamp(0.0, 1.0),
        raw,
        sided,
    })
}

/// Lower and upper bounds on the Gaussian upper tail Pr{Z >= a}, normalized
/// to unit variance before applying the unit-variance formulas (the printed
/// form mixes sigma scalings; `x = a/sigma` keeps it dimensionless).
pub fn gaussian_tail_sandwich(sigma2: f64, a: f64) -> Result<(f64, f64)> {
    if !(sigma2 > 0.0) {
        return Err(domain(format!("sigma2 must be positive, got {sigma2}")));
    }
    if !(a > 0.0) {
        return Err(domain(format!("threshold a must be positive, got {a}")));
    }
    let x = a / sigma2.sqrt();
    let core = (-0.5 * x * x).exp() / (x * (2.0 * PI).sqrt());
    let upper = core;
    let lower = core / (1.0 + x.powi(-2));
    Ok((lower, upper))
}

/// Result of turning a bounded range into a variance proxy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RangeProxy {
    /// Proxy `(b-a)^2/4`.
    Proxy(f64),
    /// The range was a single point; the variable is a constant and has no
    /// positive proxy.
    DegenerateConstant,
}

/// Variance proxy of a random variable supported on [a, b]. The mean is not
/// part of the result; the caller supplies it when building a spec.
pub fn hoeffding_proxy(a: f64, b: f64) -> Result<RangeProxy> {
    if a > b {
        return Err(domain(format!("range requires a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(RangeProxy::DegenerateConstant);
    }
    Ok(RangeProxy::Proxy((b - a).powi(2) / 4.0))
}

/// Proxy of a weighted sum `sum_i a_i X_i`.
///
/// Scaling: `a X` is `a^2 sigma^2`-subgaussian. Sums: independent variables
/// add proxies, `sum a_i^2 sigma_i^2`; without independence only the
/// `(sum |a_i| sigma_i)^2` combination is valid.
pub fn proxy_algebra(
    specs: &[SubgaussianSpec],
    weights: &[f64],
    independent: bool,
) -> Result<SubgaussianSpec> {
    if specs.is_empty() {
        return Err(domain("proxy algebra requires at least one spec"));
    }
    if specs.len() != weights.len() {
        return Err(domain(format!(
            "got {} specs but {} weights",
            specs.len(),
            weights.len()
        )));
    }
    let mean = specs
        .iter()
        .zip(weights)
        .map(|(s, a)| a * s.mean)
        .sum::<f64>();
    let proxy = if independent {
        specs
            .iter()
            .zip(weights)
            .map(|(s, a)| a * a * s.variance_proxy)
            .sum::<f64>()
    } else {
        specs
            .iter()
            .zip(weights)
            .map(|(s, a)| a.abs() * s.sigma())
            .sum::<f64>()
            .powi(2)
    };
    SubgaussianSpec::new(mean, proxy)
}

/// Bound `1/sqrt(1 - 2 lambda sigma^2)` on the MGF of the square of a
/// zero-mean sigma^2-subgaussian variable, valid for 0 <= lambda < 1/(2 sigma^2).
pub fn square_mgf_bound(sigma2: f64, lambda: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(domain(format!("sigma2 must be positive, got {sigma2}")));
    }
    if lambda < 0.0 {
        return Err(domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if lambda >= 1.0 / (2.0 * sigma2) {
        return Err(domain(format!(
            "MGF of the square diverges: lambda = {lambda} >= 1/(2 sigma^2) = {}",
            1.0 / (2.0 * sigma2)
        )));
    }
    Ok(1.0 / (1.0 - 2.0 * lambda * sigma2).sqrt())
}

/// Which maximal inequality to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalKind {
    /// `E max_i X_i <= sqrt(2 sigma^2 ln n)`.
    Expectation,
    /// `E max_i |X_i| <= sqrt(2 sigma^2 ln 2n)`.
    ExpectationAbs,
    /// `Pr{max_i X_i >= sqrt(2 sigma^2 ln n) + eps} <= exp(-eps^2/2 sigma^2)`.
    Tail,
}

/// Maximal inequalities for n zero-mean sigma^2-subgaussian variables
/// (dependence allowed). Requires n >= 2.
pub fn maximal_bounds(sigma2: f64, n: u64, epsilon: f64, kind: MaximalKind) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(domain(format!("sigma2 must be positive, got {sigma2}")));
    }
    if n < 2 {
        return Err(domain(format!("maximal inequalities require n >= 2, got {n}")));
    }
    let nf = n as f64;
    match kind {
        MaximalKind::Expectation => Ok((2.0 * sigma2 * nf.ln()).sqrt()),
        MaximalKind::ExpectationAbs => Ok((2.0 * sigma2 * (2.0 * nf).ln()).sqrt()),
        MaximalKind::Tail => {
            if epsilon < 0.0 {
                return Err(domain(format!("epsilon must be >= 0, got {epsilon}")));
            }
            Ok((-epsilon * epsilon / (2.0 * sigma2)).exp())
        }
    }
}

/// Hoeffding's inequality for a sample mean of independent variables with
/// ranges `[a_i, b_i]`: `Pr{|S_n - mu| > eps} <= 2 exp(-2 n^2 eps^2 / sum (b_i-a_i)^2)`,
/// clamped to 1.
pub fn hoeffding_inequality(ranges: &[(f64, f64)], epsilon: f64) -> Result<f64> {
    if ranges.is_empty() {
        return Err(domain("at least one range is required"));
    }
    if !(epsilon > 0.0) {
        return Err(domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let mut denom = 0.0;
    for &(a, b) in ranges {
        if a > b {
            return Err(domain(format!("range requires a <= b, got [{a}, {b}]")));
        }
        denom += (b - a).powi(2);
    }
    if denom == 0.0 {
        return Err(domain("all ranges are degenerate points"));
    }
    let n = ranges.len() as f64;
    let raw = 2.0 * (-2.0 * n * n * epsilon * epsilon / denom).exp();
    Ok(raw.min(1.0))
}

/// Built-in scalar sources for the tail checker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceDist {
    Gaussian { mean: f64, sigma2: f64 },
    /// Uniform on {-1, +1}.
    Rademacher,
    Uniform { a: f64, b: f64 },
}

impl SourceDist {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            SourceDist::Gaussian { mean, sigma2 } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + sigma2.sqrt() * z
            }
            SourceDist::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            SourceDist::Uniform { a, b } => a + (b - a) * rng.random::<f64>(),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            SourceDist::Gaussian { mean, .. } => mean,
            SourceDist::Rademacher => 0.0,
            SourceDist::Uniform { a, b } => 0.5 * (a + b),
        }
    }

    /// Variance proxy certified for this family (Gaussian: the variance;
    /// bounded families: the Hoeffding proxy).
    pub fn variance_proxy(&self) -> f64 {
        match *self {
            SourceDist::Gaussian { sigma2, .. } => sigma2,
            SourceDist::Rademacher => 1.0,
            SourceDist::Uniform { a, b } => (b - a).powi(2) / 4.0,
        }
    }

    pub fn spec(&self) -> SubgaussianSpec {
        SubgaussianSpec {
            mean: self.mean(),
            variance_proxy: self.variance_proxy(),
        }
    }
}

/// Statistic whose upper tail is checked empirically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailStatistic {
    /// A single draw.
    Raw,
    /// Mean of `n` i.i.d. draws.
    SampleMean { n: u64 },
}

/// Empirical tail-check report. The confidence halfwidth is computed from
/// Hoeffding's inequality applied to the Bernoulli hit indicators, so the
/// harness certifies itself with the same tool it verifies.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McTailReport {
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub hoeffding_halfwidth: f64,
    pub seed: u64,
}

/// Confidence level used for the Monte Carlo halfwidth.
pub const MC_ALPHA: f64 = 1e-3;

/// Frequency of `{statistic >= mean + epsilon}` over seeded trials.
pub fn empirical_tail_check(
    source: SourceDist,
    statistic: TailStatistic,
    epsilon: f64,
    trials: u64,
    seed: u64,
) -> Result<McTailReport> {
    if trials < 1000 {
        return Err(Error::Config(format!(
            "need at least 1000 trials for a meaningful confidence radius, got {trials}"
        )));
    }
    if epsilon < 0.0 {
        return Err(domain(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let threshold = source.mean() + epsilon;
    let mut hits = 0u64;
    for_each_trial(seed, trials, |rng| {
        let value = match statistic {
            TailStatistic::Raw => source.sample(rng),
            TailStatistic::SampleMean { n } => {
                let mut acc = 0.0;
                for _ in 0..n {
                    acc += source.sample(rng);
                }
                acc / n as f64
            }
        };
        if value >= threshold {
            hits += 1;
        }
    });
    let frequency = hits as f64 / trials as f64;
    let halfwidth = ((2.0 / MC_ALPHA).ln() / (2.0 * trials as f64)).sqrt();
    Ok(McTailReport {
        trials,
        hits,
        frequency,
        hoeffding_halfwidth: halfwidth,
        seed,
    })
}

/// Monte Carlo estimate of `E max_i X_i` for n i.i.d. draws of `source`.
/// Used to sanity-check the maximal inequality.
pub fn empirical_max_expectation(
    source: SourceDist,
    n: u64,
    trials: u64,
    seed: u64,
) -> OnlineStats {
    let mut stats = OnlineStats::default();
    for_each_trial(seed, trials, |rng| {
        let mut m = f64::NEG_INFINITY;
        for _ in 0..n {
            m = m.max(source.sample(rng) - source.mean());
        }
        stats.push(m);
    });
    stats
}
