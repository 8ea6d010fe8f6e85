//! Mutual-information generalization bounds, the Gaussian-mean individual
//! information computation, the PAC-Bayes bound, and the Donsker-Varadhan
//! variational check.

use super::finite::kl_pmf;
use crate::error::{domain, Result};
use crate::report::{GenBoundReport, LogBase};
use crate::rng::stream_rng;
use rand::Rng;
use rand_distr::StandardNormal;

/// Information source for the expected-generalization bound.
#[derive(Debug, Clone)]
pub enum MiBoundSource {
    /// I(W; Z^n) in nats: bound sqrt(2 sigma^2 I / n).
    Mi { nats: f64 },
    /// Finite class: I <= ln |W|, bound sqrt(2 sigma^2 ln|W| / n).
    FiniteClass { size: usize },
    /// Per-sample informations I(W; Z_i): bound (1/n) sum sqrt(2 sigma^2 I_i).
    Individual { nats: Vec<f64> },
    /// Single-coordinate posterior stability epsilon: I <= n epsilon and the
    /// bound collapses to sqrt(2 sigma^2 epsilon).
    Stability { epsilon: f64 },
}

pub fn mi_gen_bound(sigma2: f64, n: u64, source: &MiBoundSource) -> Result<GenBoundReport> {
    if !(sigma2 > 0.0) || n == 0 {
        return Err(domain("need sigma2 > 0 and n >= 1"));
    }
    let nf = n as f64;
    let report = match source {
        MiBoundSource::Mi { nats } => {
            if !(*nats >= 0.0) {
                return Err(domain("mutual information must be >= 0"));
            }
            GenBoundReport::new(
                "mi_generalization",
                (2.0 * sigma2 * nats / nf).sqrt(),
                LogBase::E,
            )
            .with("mi_nats", *nats)
        }
        MiBoundSource::FiniteClass { size } => {
            if *size < 1 {
                return Err(domain("class size must be >= 1"));
            }
            GenBoundReport::new(
                "mi_finite_class",
                (2.0 * sigma2 * (*size as f64).ln() / nf).sqrt(),
                LogBase::E,
            )
            .with("class_size", *size as f64)
        }
        MiBoundSource::Individual { nats } => {
            if nats.len() != n as usize {
                return Err(domain("need one I(W; Z_i) per sample"));
            }
            if nats.iter().any(|&i| !(i >= 0.0)) {
                return Err(domain("mutual informations must be >= 0"));
            }
            let value = nats
                .iter()
                .map(|&i| (2.0 * sigma2 * i).sqrt())
                .sum::<f64>()
                / nf;
            GenBoundReport::new("mi_individual", value, LogBase::E)
        }
        MiBoundSource::Stability { epsilon } => {
            if !(*epsilon >= 0.0) {
                return Err(domain("stability epsilon must be >= 0"));
            }
            GenBoundReport::new(
                "mi_stability",
                (2.0 * sigma2 * epsilon).sqrt(),
                LogBase::E,
            )
            .with("epsilon", *epsilon)
            .with("mi_upper_nats", nf * epsilon)
        }
    };
    Ok(report
        .with("sigma2", sigma2)
        .with("n", nf))
}

/// Per-sample information of the sample mean of n i.i.d. N(theta, sigma^2)
/// draws: each (W, Z_i) pair is bivariate Gaussian with squared correlation
/// 1/n, so I(W; Z_i) = -(1/2) ln(1 - 1/n) nats. The joint information
/// I(W; Z^n) is infinite (W is a deterministic function of the data), which
/// is why the per-sample route is the useful one here.
pub fn gaussian_mean_individual_mi(n: u64, sigma2: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(domain("per-sample information diverges at n = 1; need n >= 2"));
    }
    if !(sigma2 > 0.0) {
        return Err(domain("sigma2 must be positive"));
    }
    let i = -0.5 * (1.0 - 1.0 / n as f64).ln();
    let bound = (2.0 * sigma2 * i).sqrt();
    Ok((i, bound))
}

/// Simulate (W, Z_1) pairs for the sample mean of n i.i.d. N(0, sigma2).
pub fn simulate_mean_pairs(n: u64, sigma2: f64, trials: u64, seed: u64) -> Vec<(f64, f64)> {
    let sigma = sigma2.sqrt();
    let mut rng = stream_rng(seed, 0);
    (0..trials)
        .map(|_| {
            let z1: f64 = sigma * rng.sample::<f64, _>(StandardNormal);
            let mut sum = z1;
            for _ in 1..n {
                sum += sigma * rng.sample::<f64, _>(StandardNormal);
            }
            (sum / n as f64, z1)
        })
        .collect()
}

/// Binned plug-in mutual information estimate in nats (an estimate, not an
/// oracle): equal-width bins, count ceil(trials^(1/3)) per axis.
pub fn plugin_mi_binned(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 1000 {
        return Err(domain("plug-in estimate needs at least 1000 pairs"));
    }
    let bins = (pairs.len() as f64).powf(1.0 / 3.0).ceil() as usize;
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pairs {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let bin = |v: f64, lo: f64, hi: f64| -> usize {
        (((v - lo) / (hi - lo) * bins as f64) as usize).min(bins - 1)
    };
    let mut joint = vec![0u64; bins * bins];
    let mut mx = vec![0u64; bins];
    let mut my = vec![0u64; bins];
    for &(x, y) in pairs {
        let i = bin(x, x0, x1);
        let j = bin(y, y0, y1);
        joint[i * bins + j] += 1;
        mx[i] += 1;
        my[j] += 1;
    }
    let n = pairs.len() as f64;
    let mut mi = 0.0;
    for i in 0..bins {
        for j in 0..bins {
            let c = joint[i * bins + j];
            if c > 0 {
                let pij = c as f64 / n;
                mi += pij * (pij * n * n / (mx[i] as f64 * my[j] as f64)).ln();
            }
        }
    }
    Ok(mi.max(0.0))
}

/// High-probability PAC-Bayes bound:
/// `sqrt((2 sigma^2 / (n-1)) (kl + (1/2) ln n + ln(1/delta)))`.
pub fn pac_bayes_bound(sigma2: f64, n: u64, kl: f64, delta: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(domain("sigma2 must be positive"));
    }
    if n < 2 {
        return Err(domain("need n >= 2 (the bound divides by n - 1)"));
    }
    if !(kl >= 0.0) {
        return Err(domain("KL divergence must be >= 0"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("delta must lie in (0,1), got {delta}")));
    }
    let nf = n as f64;
    Ok((2.0 * sigma2 / (nf - 1.0) * (kl + 0.5 * nf.ln() + (1.0 / delta).ln())).sqrt())
}

/// Donsker-Varadhan check report.
#[derive(Debug, Clone)]
pub struct DvReport {
    pub kl_nats: f64,
    /// Largest variational lower bound among the sampled test functions.
    pub best_sampled_lower: f64,
    /// |lower - KL| at the optimal psi = ln(p/q).
    pub equality_gap: f64,
}

/// Verify `E_p psi - ln E_q e^psi <= KL(p||q)` on random test functions and
/// equality at the optimizer.
pub fn dv_variational_check(
    p: &[f64],
    q: &[f64],
    psi_samples: u64,
    seed: u64,
) -> Result<DvReport> {
    if p.len() != q.len() || p.is_empty() {
        return Err(domain("pmfs must share a nonempty support"));
    }
    if q.iter().any(|&x| !(x > 0.0)) {
        return Err(domain("q must be strictly positive on the support"));
    }
    let kl = kl_pmf(p, q);
    let lower = |psi: &[f64]| -> f64 {
        let e_p: f64 = p.iter().zip(psi).map(|(&pi, &s)| pi * s).sum();
        let e_q: f64 = q.iter().zip(psi).map(|(&qi, &s)| qi * s.exp()).sum();
        e_p - e_q.ln()
    };
    let mut rng = stream_rng(seed, 0);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..psi_samples {
        let psi: Vec<f64> = (0..p.len()).map(|_| 6.0 * rng.random::<f64>() - 3.0).collect();
        let value = lower(&psi);
        if value > kl + 1e-9 {
            return Err(domain(format!(
                "variational lower bound {value} exceeded the divergence {kl}"
            )));
        }
        best = best.max(value);
    }
    // Constant test functions give exactly zero.
    let zeros = vec![0.7; p.len()];
    let at_const = lower(&zeros);
    if at_const.abs() > 1e-12 {
        return Err(domain("constant test function must give a zero lower bound"));
    }
    // The optimizer psi = ln(p/q) attains the divergence.
    let optimal: Vec<f64> = p
        .iter()
        .zip(q)
        .map(|(&pi, &qi)| if pi > 0.0 { (pi / qi).ln() } else { -700.0 })
        .collect();
    let equality_gap = (lower(&optimal) - kl).abs();
    Ok(DvReport {
        kl_nats: kl,
        best_sampled_lower: best.max(at_const),
        equality_gap,
    })
}
