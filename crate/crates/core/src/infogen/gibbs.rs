//! The Gibbs algorithm: posterior proportional to exp(-beta L_n(w)) pi(w),
//! its log partition function, and its risk bounds.

use super::finite::{kl_pmf, FiniteInstance};
use crate::error::{domain, Result};
use crate::quad::trapezoid;
use crate::report::McEstimate;
use crate::rng::{for_each_trial, OnlineStats};
use serde::{Deserialize, Serialize};

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if m.is_infinite() {
        return m;
    }
    m + terms.iter().map(|&t| (t - m).exp()).sum::<f64>().ln()
}

/// Gibbs posterior pmf on a finite instance; beta = 0 returns the prior.
pub fn gibbs_finite(inst: &FiniteInstance, beta: f64, data: &[usize]) -> Result<Vec<f64>> {
    if !(beta >= 0.0) {
        return Err(domain("inverse temperature must be >= 0"));
    }
    if data.is_empty() {
        return Err(domain("dataset must be nonempty"));
    }
    Ok(gibbs_finite_raw(inst, beta, data))
}

/// Internal unchecked variant used by the learner closures.
pub(crate) fn gibbs_finite_raw(inst: &FiniteInstance, beta: f64, data: &[usize]) -> Vec<f64> {
    let logs: Vec<f64> = (0..inst.w_card())
        .map(|w| inst.prior()[w].ln() - beta * inst.empirical_risk(data, w))
        .collect();
    let z = log_sum_exp(&logs);
    logs.iter().map(|l| (l - z).exp()).collect()
}

/// `ln sum_w pi(w) exp(-beta L_n(w))` on a finite instance.
pub fn log_partition_finite(inst: &FiniteInstance, beta: f64, data: &[usize]) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(domain("inverse temperature must be >= 0"));
    }
    if data.is_empty() {
        return Err(domain("dataset must be nonempty"));
    }
    let logs: Vec<f64> = (0..inst.w_card())
        .map(|w| inst.prior()[w].ln() - beta * inst.empirical_risk(data, w))
        .collect();
    Ok(log_sum_exp(&logs))
}

/// A density sampled on a uniform grid over [x0, x1].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridDensity {
    pub x0: f64,
    pub x1: f64,
    pub values: Vec<f64>,
}

impl GridDensity {
    pub fn new(x0: f64, x1: f64, values: Vec<f64>) -> Result<Self> {
        if !(x1 > x0) || values.len() < 2 {
            return Err(domain("grid density needs x1 > x0 and at least 2 samples"));
        }
        if values.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(domain("density values must be finite and >= 0"));
        }
        let d = GridDensity { x0, x1, values };
        let mass = d.mass();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(domain(format!(
                "grid density must integrate to 1 within 1e-6, got {mass}"
            )));
        }
        Ok(d)
    }

    pub fn step(&self) -> f64 {
        (self.x1 - self.x0) / (self.values.len() - 1) as f64
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.values.len()).map(move |i| self.x0 + i as f64 * h)
    }

    pub fn mass(&self) -> f64 {
        trapezoid(&self.values, self.step())
    }

    pub fn mean(&self) -> f64 {
        let h = self.step();
        let weighted: Vec<f64> = self
            .grid()
            .zip(&self.values)
            .map(|(x, &v)| x * v)
            .collect();
        trapezoid(&weighted, h)
    }
}

/// Gibbs posterior over a grid prior: `f(w) prop exp(-beta loss(w)) pi(w)`,
/// normalized by trapezoid quadrature.
pub fn gibbs_grid(
    prior: &GridDensity,
    empirical_loss: impl Fn(f64) -> f64,
    beta: f64,
) -> Result<GridDensity> {
    if !(beta >= 0.0) {
        return Err(domain("inverse temperature must be >= 0"));
    }
    let unnormalized: Vec<f64> = prior
        .grid()
        .zip(&prior.values)
        .map(|(x, &p)| p * (-beta * empirical_loss(x)).exp())
        .collect();
    let mass = trapezoid(&unnormalized, prior.step());
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(domain("posterior mass is not normalizable on this grid"));
    }
    GridDensity::new(
        prior.x0,
        prior.x1,
        unnormalized.into_iter().map(|v| v / mass).collect(),
    )
}

/// `ln integral exp(-beta loss(w)) pi(w) dw` by trapezoid quadrature.
pub fn log_partition_grid(
    prior: &GridDensity,
    empirical_loss: impl Fn(f64) -> f64,
    beta: f64,
) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(domain("inverse temperature must be >= 0"));
    }
    let integrand: Vec<f64> = prior
        .grid()
        .zip(&prior.values)
        .map(|(x, &p)| p * (-beta * empirical_loss(x)).exp())
        .collect();
    let mass = trapezoid(&integrand, prior.step());
    if !(mass > 0.0) {
        return Err(domain("partition function vanished on the grid"));
    }
    Ok(mass.ln())
}

/// Closed-form Gibbs posterior for the squared-distance empirical loss
/// `L_n(w) = (1/n) sum ||w - z_i||^2` under a standard normal prior:
/// a spherical Gaussian with precision 2 beta + 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianPosterior {
    pub mean: Vec<f64>,
    pub variance: f64,
}

pub fn gibbs_gaussian_mean(beta: f64, data: &[Vec<f64>]) -> Result<GaussianPosterior> {
    if !(beta >= 0.0) {
        return Err(domain("inverse temperature must be >= 0"));
    }
    if data.is_empty() {
        return Err(domain("dataset must be nonempty"));
    }
    let dim = data[0].len();
    if dim == 0 || data.iter().any(|z| z.len() != dim) {
        return Err(domain("data points must share a positive dimension"));
    }
    let mut mean = vec![0.0; dim];
    for z in data {
        for (m, &v) in mean.iter_mut().zip(z) {
            *m += v;
        }
    }
    let n = data.len() as f64;
    let shrink = 2.0 * beta / (2.0 * beta + 1.0);
    for m in mean.iter_mut() {
        *m = shrink * (*m / n);
    }
    Ok(GaussianPosterior {
        mean,
        variance: 1.0 / (2.0 * beta + 1.0),
    })
}

/// KL(N(mean, variance I) || N(0, I)) in nats.
pub fn kl_gaussian_vs_standard(posterior: &GaussianPosterior) -> f64 {
    let d = posterior.mean.len() as f64;
    let mu2: f64 = posterior.mean.iter().map(|m| m * m).sum();
    0.5 * (mu2 + d * (posterior.variance - 1.0 - posterior.variance.ln()))
}

/// KL(posterior || prior) for finite pmfs in nats.
pub fn kl_posterior_prior_finite(posterior: &[f64], prior: &[f64]) -> f64 {
    kl_pmf(posterior, prior)
}

/// Expected generalization bound of the Gibbs algorithm for losses in [0,1]:
/// `beta / 2n`.
pub fn gibbs_gen_bound(beta: f64, n: u64) -> Result<f64> {
    if !(beta > 0.0) || n == 0 {
        return Err(domain("need beta > 0 and n >= 1"));
    }
    Ok(beta / (2.0 * n as f64))
}

/// Additive excess-risk overhead of the Gibbs algorithm:
/// `(d/beta) ln(A beta / d) + beta sigma^2 / (2n)`. The constant A is
/// deliberately a caller input; the theory leaves it unspecified.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RiskOverhead {
    pub value: f64,
    /// Set when A beta / d <= 1, making the log term negative.
    pub log_term_negative: bool,
}

pub fn gibbs_risk_overhead(sigma2: f64, d: u64, a: f64, beta: f64, n: u64) -> Result<RiskOverhead> {
    if !(sigma2 > 0.0) || d == 0 || n == 0 {
        return Err(domain("need sigma2 > 0, d >= 1, n >= 1"));
    }
    if !(a > 0.0) || !(beta > 0.0) {
        return Err(domain("need A > 0 and beta > 0"));
    }
    let df = d as f64;
    let ratio = a * beta / df;
    let value = df / beta * ratio.ln() + beta * sigma2 / (2.0 * n as f64);
    Ok(RiskOverhead {
        value,
        log_term_negative: ratio <= 1.0,
    })
}

/// Monte Carlo estimate of the exact-risk-bound right-hand side:
/// `E_{Z^n}(-(1/beta) ln E_{W~pi} exp(-beta L_n(W))) + beta sigma^2 / 2n`.
pub fn gibbs_risk_exact_mc(
    inst: &FiniteInstance,
    beta: f64,
    n: u64,
    sigma2: f64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if !(beta > 0.0) || n == 0 {
        return Err(domain("need beta > 0 and n >= 1"));
    }
    if trials < 200 {
        return Err(domain(format!(
            "need at least 200 dataset draws for the risk estimate, got {trials}"
        )));
    }
    let offset = beta * sigma2 / (2.0 * n as f64);
    let mut stats = OnlineStats::default();
    for_each_trial(seed, trials, |rng| {
        let data = inst.sample_dataset(n, rng);
        let a = log_partition_finite(inst, beta, &data).expect("finite partition");
        stats.push(-a / beta + offset);
    });
    Ok(McEstimate {
        mean: stats.mean(),
        std_error: stats.std_error(),
        trials,
    })
}

/// Empirical coverage of the PAC-Bayes inequality over seeded dataset draws
/// with the exact Gibbs learner: fraction of draws where the posterior
/// expectation of |L - L_n| stays below the bound priced at KL(posterior,
/// prior).
pub fn pac_bayes_coverage(
    inst: &FiniteInstance,
    beta: f64,
    n: u64,
    sigma2: f64,
    delta: f64,
    draws: u64,
    seed: u64,
) -> Result<f64> {
    if draws == 0 {
        return Err(domain("need at least one draw"));
    }
    let mut hits = 0u64;
    let mut checked = 0u64;
    for_each_trial(seed, draws, |rng| {
        let data = inst.sample_dataset(n, rng);
        let posterior = gibbs_finite_raw(inst, beta, &data);
        let kl = kl_pmf(&posterior, inst.prior());
        let bound = super::bounds::pac_bayes_bound(sigma2, n, kl, delta)
            .expect("validated parameters");
        let actual: f64 = posterior
            .iter()
            .enumerate()
            .map(|(w, &pw)| pw * (inst.true_risk(w) - inst.empirical_risk(&data, w)).abs())
            .sum();
        checked += 1;
        if actual <= bound {
            hits += 1;
        }
    });
    Ok(hits as f64 / checked as f64)
}
