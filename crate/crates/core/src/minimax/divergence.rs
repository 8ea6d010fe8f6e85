//! Divergence kernels: Gaussian-location and grid-density relative entropy,
//! squared Hellinger distance, and total variation.

use crate::error::{domain, Result};
use crate::quad::trapezoid;
use serde::{Deserialize, Serialize};

/// Relative entropy between two isotropic Gaussians with common variance:
/// `||theta - theta'||^2 / (2 sigma^2)` nats.
pub fn kl_gaussian_location(theta: &[f64], theta_prime: &[f64], sigma2: f64) -> Result<f64> {
    if theta.len() != theta_prime.len() || theta.is_empty() {
        return Err(domain("parameters must share a nonempty dimension"));
    }
    if !(sigma2 > 0.0) {
        return Err(domain("sigma2 must be positive"));
    }
    let d2: f64 = theta
        .iter()
        .zip(theta_prime)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(d2 / (2.0 * sigma2))
}

fn check_grid_pair(f: &[f64], g: &[f64]) -> Result<f64> {
    if f.len() != g.len() || f.len() < 2 {
        return Err(domain("densities must share a grid with at least 2 points"));
    }
    if f.iter().chain(g).any(|&v| !(v >= 0.0) || !v.is_finite()) {
        return Err(domain("density values must be finite and >= 0"));
    }
    Ok(1.0 / (f.len() - 1) as f64)
}

/// Relative entropy between densities sampled on a uniform [0,1] grid, in
/// nats, by trapezoid quadrature. Infinite when f has mass where g vanishes.
pub fn kl_grid_density(f: &[f64], g: &[f64]) -> Result<f64> {
    let h = check_grid_pair(f, g)?;
    let mut integrand = Vec::with_capacity(f.len());
    for (&fi, &gi) in f.iter().zip(g) {
        if fi > 0.0 && gi <= 0.0 {
            return Ok(f64::INFINITY);
        }
        integrand.push(if fi > 0.0 { fi * (fi / gi).ln() } else { 0.0 });
    }
    Ok(trapezoid(&integrand, h).max(0.0))
}

/// Squared Hellinger distance `(1/2) integral (sqrt f - sqrt g)^2`, in [0,1].
pub fn hellinger_sq(f: &[f64], g: &[f64]) -> Result<f64> {
    let h = check_grid_pair(f, g)?;
    let integrand: Vec<f64> = f
        .iter()
        .zip(g)
        .map(|(&fi, &gi)| (fi.sqrt() - gi.sqrt()).powi(2))
        .collect();
    Ok((0.5 * trapezoid(&integrand, h)).clamp(0.0, 1.0))
}

/// Total variation distance `(1/2) integral |f - g|` for grid densities.
pub fn total_variation(f: &[f64], g: &[f64]) -> Result<f64> {
    let h = check_grid_pair(f, g)?;
    let integrand: Vec<f64> = f.iter().zip(g).map(|(&fi, &gi)| (fi - gi).abs()).collect();
    Ok((0.5 * trapezoid(&integrand, h)).clamp(0.0, 1.0))
}

/// Result of the Hellinger-versus-relative-entropy comparison
/// `D(f || g) <= D_H^2(f, g) / (c1 ln 2)` with D in bits, for densities
/// bounded below by c1.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HellingerKlReport {
    pub kl_bits: f64,
    pub bound_bits: f64,
    pub holds: bool,
    /// bound / divergence, recorded when the divergence is positive.
    pub slack_ratio: Option<f64>,
}

pub fn hellinger_kl_inequality_check(f: &[f64], g: &[f64], c1: f64) -> Result<HellingerKlReport> {
    if !(c1 > 0.0) {
        return Err(domain("c1 must be positive"));
    }
    let min_val = f.iter().chain(g).fold(f64::INFINITY, |m, &v| m.min(v));
    if min_val < c1 - 1e-12 {
        return Err(domain(format!(
            "densities must be >= c1 = {c1}; observed minimum {min_val}"
        )));
    }
    let kl_bits = kl_grid_density(f, g)? / std::f64::consts::LN_2;
    let bound_bits = hellinger_sq(f, g)? / (c1 * std::f64::consts::LN_2);
    Ok(HellingerKlReport {
        kl_bits,
        bound_bits,
        holds: kl_bits <= bound_bits + 1e-12,
        slack_ratio: (kl_bits > 0.0).then(|| bound_bits / kl_bits),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    fn uniform_grid(n: usize) -> Vec<f64> {
        vec![1.0; n]
    }

    fn sine_density(n: usize, amp: f64) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                1.0 + amp * (2.0 * std::f64::consts::PI * t).sin()
            })
            .collect()
    }

    #[test]
    fn gaussian_location_values() {
        assert_eq!(kl_gaussian_location(&[0.0], &[0.0], 1.0).unwrap(), 0.0);
        assert!((kl_gaussian_location(&[0.0], &[2.0], 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(kl_gaussian_location(&[0.0], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn hellinger_edge_cases_and_grid_refinement() {
        let n = 4096;
        let f = sine_density(n, 0.5);
        let u = uniform_grid(n);
        assert_eq!(hellinger_sq(&f, &f).unwrap(), 0.0);
        // Disjoint supports give 1.
        let mut left = vec![0.0; n];
        let mut right = vec![0.0; n];
        for i in 0..n / 2 {
            left[i] = 2.0;
            right[n - 1 - i] = 2.0;
        }
        assert!((hellinger_sq(&left, &right).unwrap() - 1.0).abs() < 1e-3);
        // 10x refinement oracle.
        let coarse = hellinger_sq(&f, &u).unwrap();
        let nf = 40960;
        let fine = hellinger_sq(&sine_density(nf, 0.5), &uniform_grid(nf)).unwrap();
        assert!((coarse - fine).abs() < 1e-6);
    }

    #[test]
    fn hellinger_kl_check_reports_honestly() {
        let n = 4096;
        // For near-uniform pairs the divergence-to-Hellinger ratio sits near
        // 4 nats, so the c1-scaled comparison holds once 1/c1 clears that:
        // declared floor c1 = 0.2 on a pair bounded well above it.
        let f = sine_density(n, 0.1);
        let u = uniform_grid(n);
        let rep = hellinger_kl_inequality_check(&f, &u, 0.2).unwrap();
        assert!(rep.holds, "{rep:?}");
        assert!(rep.slack_ratio.unwrap() > 1.0);
        // At c1 = 1/2 the same comparison fails on the amplitude-1/2 pair:
        // the checker must say so rather than assert. (Quadrature puts the
        // divergence near 3.9 Hellinger-squared nats, above 1/c1 = 2.)
        let rep = hellinger_kl_inequality_check(&sine_density(n, 0.5), &u, 0.5).unwrap();
        assert!(!rep.holds);
        assert!(rep.kl_bits > rep.bound_bits);
        // Equal densities: 0 <= 0.
        let same = hellinger_kl_inequality_check(&u, &u, 0.5).unwrap();
        assert_eq!(same.kl_bits, 0.0);
        assert!(same.holds);
        // Densities dipping below c1 are rejected.
        assert!(hellinger_kl_inequality_check(&sine_density(n, 0.9), &u, 0.5).is_err());
    }

    #[test]
    fn pinsker_and_hellinger_rails_on_random_densities() {
        // Standard comparisons as numerical sanity rails for the kernels:
        // KL_nats >= 2 TV^2 and H^2 <= TV <= sqrt(2) H.
        let mut rng = stream_rng(17, 0);
        for _ in 0..50 {
            let n = 512;
            let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
            let mass = trapezoid(&raw, 1.0 / (n - 1) as f64);
            let f: Vec<f64> = raw.iter().map(|v| v / mass).collect();
            let raw2: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
            let mass2 = trapezoid(&raw2, 1.0 / (n - 1) as f64);
            let g: Vec<f64> = raw2.iter().map(|v| v / mass2).collect();
            let kl = kl_grid_density(&f, &g).unwrap();
            let tv = total_variation(&f, &g).unwrap();
            let h2 = hellinger_sq(&f, &g).unwrap();
            assert!(kl + 1e-9 >= 2.0 * tv * tv, "pinsker: {kl} vs {tv}");
            assert!(h2 <= tv + 1e-9);
            assert!(tv <= (2.0 * h2).sqrt() + 1e-9);
        }
    }
}
