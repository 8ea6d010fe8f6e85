//! The estimation-to-testing reduction simulator and the exact binary
//! minimax test.

use super::fano::{FanoInstance, FanoKind};
use crate::error::{domain, size, Result};
use crate::rng::{for_each_trial, OnlineStats};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Estimators fed into the reduction simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionEstimator {
    /// Coordinatewise sample mean.
    SampleMean,
    /// Ignores the data and returns the first packing member.
    Constant,
    /// Returns the true parameter (diagnostic).
    Oracle,
}

/// Empirical outcome of the reduction: the nearest-neighbor test error
/// against the averaged miss probability it is bounded by.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReductionReport {
    pub error_freq: f64,
    pub error_se: f64,
    pub miss_freq: f64,
    pub miss_se: f64,
    pub trials: u64,
    /// Whether error_freq <= miss_freq + 3 combined standard errors.
    pub direction_holds: bool,
}

/// Simulate J uniform, data from the J-th member, apply the estimator and
/// the nearest-neighbor test (ties to the lowest index), and compare
/// `Pr{psi != J}` against the averaged miss probability
/// `(1/m) sum_j P_j{rho(theta_j, theta_hat) >= delta}` with
/// `delta = separation / 2`.
pub fn testing_reduction_sim(
    instance: &FanoInstance,
    estimator: ReductionEstimator,
    trials: u64,
    seed: u64,
) -> Result<ReductionReport> {
    let FanoKind::GaussianLocation { sigma2 } = &instance.kind else {
        return Err(domain("the simulator currently samples Gaussian-location instances"));
    };
    if trials < 100 {
        return Err(domain("need at least 100 trials"));
    }
    let sigma = sigma2.sqrt();
    let m = instance.hypotheses();
    let dim = instance.params[0].len();
    let delta = instance.separation / 2.0;
    let mut errors = OnlineStats::default();
    let mut misses = OnlineStats::default();
    for_each_trial(seed, trials, |rng: &mut ChaCha8Rng| {
        let j = (rng.random::<u64>() % m as u64) as usize;
        let theta = &instance.params[j];
        // Sufficient statistic of the n-sample experiment: the sample mean.
        let mut mean = vec![0.0f64; dim];
        for _ in 0..instance.n {
            for (acc, &t) in mean.iter_mut().zip(theta) {
                *acc += t + sigma * rng.sample::<f64, _>(StandardNormal);
            }
        }
        for v in mean.iter_mut() {
            *v /= instance.n as f64;
        }
        let estimate: Vec<f64> = match estimator {
            ReductionEstimator::SampleMean => mean,
            ReductionEstimator::Constant => instance.params[0].clone(),
            ReductionEstimator::Oracle => theta.clone(),
        };
        let dist = |a: &[f64], b: &[f64]| -> f64 {
            a.iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt()
        };
        let mut psi = 0usize;
        let mut best = f64::INFINITY;
        for (cand, p) in instance.params.iter().enumerate() {
            let d = dist(p, &estimate);
            if d < best {
                best = d;
                psi = cand;
            }
        }
        errors.push((psi != j) as u8 as f64);
        misses.push((dist(theta, &estimate) >= delta) as u8 as f64);
    });
    let combined_se = errors.std_error() + misses.std_error();
    Ok(ReductionReport {
        error_freq: errors.mean(),
        error_se: errors.std_error(),
        miss_freq: misses.mean(),
        miss_se: misses.std_error(),
        trials,
        direction_holds: errors.mean() <= misses.mean() + 3.0 * combined_se,
    })
}

/// Exact minimax value of a binary test between product measures p0^n and
/// p1^n, with the achieving likelihood-ratio threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BinaryTestResult {
    pub value: f64,
    /// Likelihood-ratio classes sorted toward hypothesis 1; the test decides
    /// 1 on the first `full_classes` classes and randomizes with weight
    /// `gamma` on the boundary class.
    pub full_classes: usize,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Exact `min over tests of max(alpha_n, beta_n)` by enumerating the dataset
/// space, sweeping likelihood-ratio thresholds, and equalizing the two
/// errors by randomizing on the boundary likelihood-ratio class.
pub fn binary_test_minimax(p0: &[f64], p1: &[f64], n: u32) -> Result<BinaryTestResult> {
    if p0.len() != p1.len() || p0.is_empty() {
        return Err(domain("hypahypotheses must share a nonempty alphabet"));
    }
    for pmf in [p0, p1] {
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > 1e-12 || pmf.iter().any(|&p| !(p >= 0.0)) {
            return Err(domain("inputs must be pmfs"));
        }
    }
    let alphabet = p0.len() as u64;
    let total = alphabet
        .checked_pow(n)
        .filter(|&t| t <= 1_000_000)
        .ok_or_else(|| size("dataset space exceeds the enumeration budget of 10^6"))?;

    // Enumerate dataset probabilities under both hypotheses.
    let mut mass: Vec<(f64, f64)> = Vec::with_capacity(total as usize);
    let mut digits = vec![0usize; n as usize];
    loop {
        let (mut q0, mut q1) = (1.0, 1.0);
        for &d in &digits {
            q0 *= p0[d];
            q1 *= p1[d];
        }
        mass.push((q0, q1));
        let mut i = 0;
        loop {
            if i == digits.len() {
                // Group outcomes into likelihood-ratio classes, largest
                // ratio (toward hypothesis 1) first.
                return sweep_threshold(mass);
            }
            digits[i] += 1;
            if digits[i] < alphabet as usize {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn sweep_threshold(mass: Vec<(f64, f64)>) -> Result<BinaryTestResult> {
    // Sort by descending p1/p0 (datasets with p0 = 0 first).
    let mut order: Vec<usize> = (0..mass.len()).collect();
    let ratio = |i: usize| -> f64 {
        let (q0, q1) = mass[i];
        if q0 == 0.0 {
            if q1 == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            q1 / q0
        }
    };
    order.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));
    // Merge equal-ratio runs into classes.
    let mut classes: Vec<(f64, f64)> = Vec::new();
    let mut idx = 0;
    while idx < order.len() {
        let r = ratio(order[idx]);
        let mut acc = (0.0, 0.0);
        while idx < order.len() && (ratio(order[idx]) == r) {
            acc.0 += mass[order[idx]].0;
            acc.1 += mass[order[idx]].1;
            idx += 1;
        }
        classes.push(acc);
    }

    // Decide 1 on the first t classes plus a gamma-fraction of class t.
    let mut best = BinaryTestResult {
        value: f64::INFINITY,
        full_classes: 0,
        gamma: 0.0,
        alpha: 0.0,
        beta: 0.0,
    };
    let mut alpha_t = 0.0; // P0 mass decided 1
    let mut beta_t = 1.0; // P1 mass decided 0
    for t in 0..=classes.len() {
        // Deterministic candidate at this threshold.
        let consider = |alpha: f64, beta: f64, t: usize, gamma: f64, best: &mut BinaryTestResult| {
            let v = alpha.max(beta);
            if v < best.value - 1e-15 {
                *best = BinaryTestResult {
                    value: v,
                    full_classes: t,
                    gamma,
                    alpha,
                    beta,
                };
            }
        };
        consider(alpha_t, beta_t, t, 0.0, &mut best);
        if t < classes.len() {
            let (c0, c1) = classes[t];
            // Randomize within the boundary class to equalize the errors.
            if c0 + c1 > 0.0 {
                let gamma = ((beta_t - alpha_t) / (c0 + c1)).clamp(0.0, 1.0);
                consider(
                    alpha_t + gamma * c0,
                    beta_t - gamma * c1,
                    t,
                    gamma,
                    &mut best,
                );
            }
            alpha_t += c0;
            beta_t -= c1;
        }
    }
    Ok(best)
}
