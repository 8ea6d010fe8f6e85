//! Empirical Rademacher complexity of a finite loss matrix, exact by sign
//! enumeration or by Monte Carlo.

use crate::error::{domain, size, Result};
use crate::report::McEstimate;
use crate::rng::{for_each_trial, OnlineStats};
use rand::Rng;

fn check_matrix(loss: &[Vec<f64>]) -> Result<(usize, usize)> {
    let n = loss.len();
    if n == 0 {
        return Err(domain("loss matrix must have at least one sample row"));
    }
    let k = loss[0].len();
    if k == 0 || loss.iter().any(|row| row.len() != k) {
        return Err(domain("loss matrix rows must be nonempty and uniform"));
    }
    Ok((n, k))
}

fn sup_correlation(loss: &[Vec<f64>], signs: impl Fn(usize) -> f64) -> f64 {
    let n = loss.len();
    let k = loss[0].len();
    let mut best = 0.0f64;
    for w in 0..k {
        let mut acc = 0.0;
        for (i, row) in loss.iter().enumerate() {
            acc += signs(i) * row[w];
        }
        best = best.max((acc / n as f64).abs());
    }
    best
}

/// Exact empirical Rademacher complexity
/// `E_eps sup_w |(1/n) sum_i eps_i l(z_i, w)|` by enumerating all 2^n sign
/// vectors; n <= 20.
pub fn rademacher_exact(loss: &[Vec<f64>]) -> Result<f64> {
    let (n, _) = check_matrix(loss)?;
    if n > 20 {
        return Err(size(format!(
            "exact Rademacher enumeration supports n <= 20, got {n}"
        )));
    }
    let total = 1u64 << n;
    let mut acc = 0.0;
    for mask in 0..total {
        acc += sup_correlation(loss, |i| if (mask >> i) & 1 == 1 { 1.0 } else { -1.0 });
    }
    Ok(acc / total as f64)
}

/// Monte Carlo estimate of the same quantity.
pub fn rademacher_mc(loss: &[Vec<f64>], trials: u64, seed: u64) -> Result<McEstimate> {
    check_matrix(loss)?;
    if trials < 100 {
        return Err(domain(format!("need at least 100 trials, got {trials}")));
    }
    let n = loss.len();
    let mut stats = OnlineStats::default();
    for_each_trial(seed, trials, |rng| {
        let signs: Vec<f64> = (0..n)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        stats.push(sup_correlation(loss, |i| signs[i]));
    });
    Ok(McEstimate {
        mean: stats.mean(),
        std_error: stats.std_error(),
        trials,
    })
}

/// Closed-form exact value for a singleton class with constant loss c:
/// `c 2^{-n} sum_k C(n,k) |n - 2k| / n`.
pub fn singleton_rademacher_exact(c: f64, n: u32) -> f64 {
    let mut acc = 0.0;
    let mut binom = 1.0f64;
    for k in 0..=n {
        acc += binom * (n as f64 - 2.0 * k as f64).abs();
        binom = binom * (n - k) as f64 / (k + 1) as f64;
    }
    c * acc / 2f64.powi(n as i32) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_matches_enumeration() {
        for n in [1u32, 2, 3, 8] {
            let loss: Vec<Vec<f64>> = (0..n).map(|_| vec![0.7]).collect();
            let exact = rademacher_exact(&loss).unwrap();
            let formula = singleton_rademacher_exact(0.7, n);
            assert!((exact - formula).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn single_sample_reduces_to_max_loss() {
        // With n = 1, sup_w |eps l(z,w)| = max_w l(z,w) for either sign.
        let loss = vec![vec![0.3, 0.9, 0.5]];
        let exact = rademacher_exact(&loss).unwrap();
        assert!((exact - 0.9).abs() < 1e-15);
    }

    #[test]
    fn mc_matches_exact_within_three_se() {
        let loss: Vec<Vec<f64>> = (0..10)
            .map(|i| vec![(i % 2) as f64, ((i / 2) % 2) as f64])
            .collect();
        let exact = rademacher_exact(&loss).unwrap();
        let mc = rademacher_mc(&loss, 100_000, 99).unwrap();
        assert!(
            (mc.mean - exact).abs() <= 3.0 * mc.std_error,
            "exact {exact} vs mc {} +- {}",
            mc.mean,
            mc.std_error
        );
    }

    #[test]
    fn size_guards() {
        let loss: Vec<Vec<f64>> = (0..21).map(|_| vec![1.0]).collect();
        assert!(rademacher_exact(&loss).is_err());
        assert!(rademacher_mc(&loss, 10, 0).is_err());
    }
}
