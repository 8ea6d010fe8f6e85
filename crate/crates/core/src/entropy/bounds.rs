//! Analytic metric entropy bounds for the named spaces, plus the
//! rate-distortion comparisons.

use super::volume::{hamming_volume, log2_biguint};
use crate::error::{domain, Result};
use crate::report::LogBase;
use serde::{Deserialize, Serialize};

/// Binary entropy in bits.
pub fn binary_entropy_bits(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

/// Lower and upper bounds on metric entropy at a given resolution. The base
/// tag travels with the value to keep bits and nats from mixing silently.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EntropyBounds {
    pub lower: f64,
    pub upper: f64,
    pub log_base: LogBase,
    pub resolution: f64,
}

/// Spaces with closed-form entropy bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyFamily {
    /// Closed Euclidean ball of the given radius in `dim` dimensions.
    EuclideanBall { dim: u32, radius: f64 },
    /// {0,1}^n under Hamming distance (delta must be an integer < n/2).
    HammingCube { n: u32 },
    /// L-Lipschitz functions on [0,1] vanishing at 0, sup metric.
    Lipschitz { l: f64 },
    /// [-1,1]^dim under the sup metric.
    SupCube { dim: u32 },
}

/// Closed-form entropy bounds, in bits.
///
/// The Lipschitz lower bound is `floor(L/delta)`: that is the exponent the
/// sign-pattern construction actually yields, even though the displayed
/// summary rounds it up.
pub fn analytic_entropy_bounds(family: EntropyFamily, delta: f64) -> Result<EntropyBounds> {
    if !(delta > 0.0) {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    let (lower, upper) = match family {
        EntropyFamily::EuclideanBall { dim, radius } => {
            if !(radius > 0.0) {
                return Err(domain("ball radius must be positive"));
            }
            let d = dim as f64;
            let lower = (d * (radius / delta).log2()).max(0.0);
            let upper = d * (1.0 + 2.0 * radius / delta).log2();
            (lower, upper)
        }
        EntropyFamily::HammingCube { n } => {
            if delta.fract() != 0.0 {
                return Err(domain(format!(
                    "hamming entropy bounds need integer delta, got {delta}"
                )));
            }
            let d = delta as u32;
            if d == 0 || (d as f64) >= n as f64 / 2.0 {
                return Err(domain(format!(
                    "hamming entropy bounds need 0 < delta < n/2, got delta = {d}, n = {n}"
                )));
            }
            let nf = n as f64;
            let log_v = log2_biguint(&hamming_volume(n, d)?);
            let lower = nf - log_v;
            // Sphere-covering style upper via half-radius balls; can be
            // vacuous at delta = 1 (V(n,0) = 1), so also take the random-net
            // form and keep whichever is smaller.
            let upper_half = nf - log2_biguint(&hamming_volume(n, d / 2)?);
            let upper_random = nf + (nf * std::f64::consts::LN_2 + 1.0).log2() - log_v;
            (lower, upper_half.min(upper_random))
        }
        EntropyFamily::Lipschitz { l } => {
            if !(l > 0.0) {
                return Err(domain("Lipschitz constant must be positive"));
            }
            let lower = (l / delta).floor();
            let upper = (2.0 * l / delta).ceil() * 3f64.log2();
            (lower, upper)
        }
        EntropyFamily::SupCube { dim } => (0.0, dim as f64 * (1.0 + 1.0 / delta).log2()),
    };
    Ok(EntropyBounds {
        lower,
        upper,
        log_base: LogBase::Two,
        resolution: delta,
    })
}

/// Source model for the rate-distortion comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RdSource {
    /// Quadratic-distortion Gaussian source with the given power.
    Gaussian { power: f64 },
    /// Binary symmetric source with Hamming distortion.
    BinarySymmetric,
}

/// Rate-distortion value next to the per-dimension metric entropy bounds of
/// the matching geometric family.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RdComparison {
    pub rd_value: f64,
    pub per_dim_lower: f64,
    pub per_dim_upper: f64,
    pub log_base: LogBase,
    /// For the binary source: n*D rounded to the integer ball radius used.
    pub rounded_delta: Option<u32>,
    pub n: u64,
}

impl RdComparison {
    pub fn width(&self) -> f64 {
        self.per_dim_upper - self.per_dim_lower
    }
}

/// Compare a rate-distortion function with per-dimension metric entropy.
///
/// Gaussian: R(D) = (1/2) log2(P/D) against the Euclidean-ball bounds with
/// r = sqrt(nP), delta = sqrt(nD). Binary: R(D) = 1 - H(D) against the
/// Hamming-cube bounds at delta = round(n D) (the rounding is recorded).
pub fn rd_compare(source: RdSource, distortion: f64, n: u64) -> Result<RdComparison> {
    match source {
        RdSource::Gaussian { power } => {
            if !(power > 0.0) {
                return Err(domain("source power must be positive"));
            }
            if !(distortion > 0.0 && distortion <= power) {
                return Err(domain(format!(
                    "gaussian rate-distortion needs 0 < D <= P, got D = {distortion}, P = {power}"
                )));
            }
            let rd = 0.5 * (power / distortion).log2();
            let upper = (1.0 + 2.0 * (power / distortion).sqrt()).log2();
            Ok(RdComparison {
                rd_value: rd,
                per_dim_lower: rd,
                per_dim_upper: upper,
                log_base: LogBase::Two,
                rounded_delta: None,
                n,
            })
        }
        RdSource::BinarySymmetric => {
            if !(distortion > 0.0 && distortion < 0.5) {
                return Err(domain(format!(
                    "binary rate-distortion needs 0 < D < 1/2, got {distortion}"
                )));
            }
            if n == 0 || n > 128 {
                return Err(domain("binary comparison needs 1 <= n <= 128"));
            }
            let nf = n as f64;
            let delta = (nf * distortion).round() as u32;
            if delta == 0 || (delta as f64) >= nf / 2.0 {
                return Err(domain(format!(
                    "rounded delta = {delta} escapes 0 < delta < n/2; pick a larger n"
                )));
            }
            let rd = 1.0 - binary_entropy_bits(distortion);
            let log_v = log2_biguint(&hamming_volume(n as u32, delta)?);
            let lower = (nf - log_v) / nf;
            let upper = (nf + (nf * std::f64::consts::LN_2 + 1.0).log2() - log_v) / nf;
            Ok(RdComparison {
                rd_value: rd,
                per_dim_lower: lower,
                per_dim_upper: upper,
                log_base: LogBase::Two,
                rounded_delta: Some(delta),
                n,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{exact_covering_number, FiniteMetricSpace};

    #[test]
    fn euclidean_ball_bounds() {
        let b = analytic_entropy_bounds(EntropyFamily::EuclideanBall { dim: 1, radius: 1.0 }, 1.0)
            .unwrap();
        assert_eq!(b.lower, 0.0);
        assert!((b.upper - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn hamming_cube_bounds() {
        let b = analytic_entropy_bounds(EntropyFamily::HammingCube { n: 10 }, 2.0).unwrap();
        assert!((b.lower - 4.192645077942395).abs() < 1e-12);
        assert!(b.lower <= b.upper);
        assert!(analytic_entropy_bounds(EntropyFamily::HammingCube { n: 10 }, 5.0).is_err());
        assert!(analytic_entropy_bounds(EntropyFamily::HammingCube { n: 10 }, 1.5).is_err());
    }

    #[test]
    fn lipschitz_bounds() {
        let b = analytic_entropy_bounds(EntropyFamily::Lipschitz { l: 1.0 }, 0.1).unwrap();
        assert_eq!(b.lower, 10.0);
        assert!((b.upper - 31.69925001442312).abs() < 1e-12);
    }

    #[test]
    fn sup_cube_bounds() {
        let b = analytic_entropy_bounds(EntropyFamily::SupCube { dim: 3 }, 0.5).unwrap();
        assert_eq!(b.lower, 0.0);
        assert!((b.upper - 3.0 * 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn exact_covering_lies_within_analytic_bounds_small_cubes() {
        for n in 3..=5u32 {
            let cube = FiniteMetricSpace::hamming_cube(n).unwrap();
            for delta in 1u32..n.div_ceil(2) {
                let exact = exact_covering_number(&cube, delta as f64, cube.len()).unwrap();
                let bounds =
                    analytic_entropy_bounds(EntropyFamily::HammingCube { n }, delta as f64)
                        .unwrap();
                let h = (exact as f64).log2();
                assert!(
                    bounds.lower - 1e-9 <= h && h <= bounds.upper + 1e-9,
                    "n = {n}, delta = {delta}: H = {h} not in [{}, {}]",
                    bounds.lower,
                    bounds.upper
                );
            }
        }
    }

    #[test]
    fn rd_gaussian_values() {
        // D = P collapses the rate to zero.
        let c = rd_compare(RdSource::Gaussian { power: 1.0 }, 1.0, 10).unwrap();
        assert_eq!(c.rd_value, 0.0);
        assert_eq!(c.per_dim_lower, 0.0);
        // P = 4, D = 1: one bit, upper log2(5).
        let c = rd_compare(RdSource::Gaussian { power: 4.0 }, 1.0, 10).unwrap();
        assert!((c.rd_value - 1.0).abs() < 1e-12);
        assert!((c.per_dim_upper - 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn rd_binary_sandwich_shrinks_and_sits_above_rate() {
        let d = 0.11;
        let rd = 1.0 - binary_entropy_bits(d);
        assert!((rd - 0.500084041835472).abs() < 1e-12);
        let c20 = rd_compare(RdSource::BinarySymmetric, d, 20).unwrap();
        let c60 = rd_compare(RdSource::BinarySymmetric, d, 60).unwrap();
        // The rate 1 - H(D) lower-bounds the exact per-dimension interval;
        // the interval tightens as n grows.
        for c in [&c20, &c60] {
            assert!(c.rd_value <= c.per_dim_lower + 1e-12);
            assert!(c.per_dim_lower <= c.per_dim_upper);
        }
        assert!(c60.width() < c20.width());
        assert!(c60.per_dim_lower < c20.per_dim_lower);
    }
}
