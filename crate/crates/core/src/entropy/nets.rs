//! Greedy nets and randomized Hamming nets.

use super::space::FiniteMetricSpace;
use super::volume::hamming_volume_f64;
use crate::error::{domain, size, Error, Result};
use crate::rng::stream_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// A delta-net: centers whose delta-balls cover the space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetResult {
    pub centers: Vec<usize>,
    pub radius: f64,
    pub certified_cover: bool,
    pub space_label: String,
}

/// Order in which the greedy construction scans candidate points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GreedyOrder {
    /// Deterministic ascending index order (default; the maximality argument
    /// needs no distance recomputation).
    IndexAscending,
    /// k-center style farthest-point-first.
    FarthestFirst,
}

/// Greedy maximal delta-packing, which is then certified as a delta-net.
///
/// The center count is simultaneously an upper bound on the covering number
/// N(delta) and a lower-bound witness for the packing number M(delta).
pub fn greedy_net(space: &FiniteMetricSpace, delta: f64) -> Result<NetResult> {
    greedy_net_with_order(space, delta, GreedyOrder::IndexAscending)
}

pub fn greedy_net_with_order(
    space: &FiniteMetricSpace,
    delta: f64,
    order: GreedyOrder,
) -> Result<NetResult> {
    if space.is_empty() {
        return Err(domain("space must be nonempty"));
    }
    if !(delta >= 0.0) {
        return Err(domain(format!("delta must be >= 0, got {delta}")));
    }
    let n = space.len();
    let centers = match order {
        GreedyOrder::IndexAscending => {
            let mut centers: Vec<usize> = Vec::new();
            for p in 0..n {
                if centers.iter().all(|&c| space.distance(p, c) > delta) {
                    centers.push(p);
                }
            }
            centers
        }
        GreedyOrder::FarthestFirst => {
            let mut centers = vec![0usize];
            let mut dist: Vec<f64> = (0..n).map(|p| space.distance(p, 0)).collect();
            loop {
                let (far, far_d) = dist
                    .iter()
                    .enumerate()
                    .fold((0usize, f64::NEG_INFINITY), |acc, (i, &d)| {
                        if d > acc.1 {
                            (i, d)
                        } else {
                            acc
                        }
                    });
                if far_d <= delta {
                    break;
                }
                centers.push(far);
                for (p, d) in dist.iter_mut().enumerate() {
                    *d = d.min(space.distance(p, far));
                }
            }
            centers
        }
    };
    // Final pass: every point must lie within delta of some center.
    let certified = (0..n).all(|p| {
        centers
            .iter()
            .any(|&c| space.distance(p, c) <= delta + 1e-12)
    });
    Ok(NetResult {
        centers,
        radius: delta,
        certified_cover: certified,
        space_label: space.label().to_string(),
    })
}

/// Randomized net for the Hamming cube: draw
/// `k = ceil((2^n / V(n,delta)) ln 2^n)` uniform centers and certify the
/// cover by full enumeration, retrying with a derived seed until certified.
pub fn random_net_hamming(n: u32, delta: u32, seed: u64) -> Result<NetResult> {
    if n == 0 || n > 20 {
        return Err(size(format!(
            "random net certification enumerates 2^n points; need 1 <= n <= 20, got {n}"
        )));
    }
    if delta == 0 || (delta as f64) >= n as f64 / 2.0 {
        return Err(domain(format!(
            "delta must satisfy 0 < delta < n/2, got delta = {delta}, n = {n}"
        )));
    }
    let total = 1u64 << n;
    let volume = hamming_volume_f64(n, delta)?;
    let k = ((total as f64 / volume) * (total as f64).ln()).ceil() as usize;

    const MAX_ATTEMPTS: u64 = 64;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = stream_rng(seed, attempt);
        let centers: Vec<usize> = (0..k)
            .map(|_| (rng.random::<u64>() % total) as usize)
            .collect();
        let covered = (0..total as usize).all(|p| {
            centers
                .iter()
                .any(|&c| ((p ^ c) as u64).count_ones() <= delta)
        });
        if covered {
            return Ok(NetResult {
                centers,
                radius: delta as f64,
                certified_cover: true,
                space_label: format!("hamming:{n}"),
            });
        }
    }
    Err(Error::Certification(format!(
        "random net for hamming:{n} at delta {delta} failed to cover after {MAX_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_on_tiny_spaces() {
        let single = FiniteMetricSpace::from_points("pt", vec![vec![0.0]]).unwrap();
        assert_eq!(greedy_net(&single, 5.0).unwrap().centers.len(), 1);

        let cube2 = FiniteMetricSpace::hamming_cube(2).unwrap();
        let net = greedy_net(&cube2, 1.0).unwrap();
        assert_eq!(net.centers, vec![0b00, 0b11]);
        assert!(net.certified_cover);

        // delta = 0 forces every point to become a center.
        let cube3 = FiniteMetricSpace::hamming_cube(3).unwrap();
        let net = greedy_net(&cube3, 0.0).unwrap();
        assert_eq!(net.centers.len(), 8);
    }

    #[test]
    fn greedy_centers_form_strict_packing() {
        let cube = FiniteMetricSpace::hamming_cube(6).unwrap();
        for delta in [1.0, 2.0, 3.0] {
            let net = greedy_net(&cube, delta).unwrap();
            assert!(net.certified_cover);
            for (a, &i) in net.centers.iter().enumerate() {
                for &j in &net.centers[a + 1..] {
                    assert!(cube.distance(i, j) > delta);
                }
            }
        }
    }

    #[test]
    fn farthest_first_also_certifies() {
        let cube = FiniteMetricSpace::hamming_cube(5).unwrap();
        let net = greedy_net_with_order(&cube, 2.0, GreedyOrder::FarthestFirst).unwrap();
        assert!(net.certified_cover);
    }

    #[test]
    fn random_net_center_counts_match_formula() {
        // k = ceil((16/5) ln 16) = 9 for n = 4, delta = 1.
        let net = random_net_hamming(4, 1, 11).unwrap();
        assert_eq!(net.centers.len(), 9);
        assert!(net.certified_cover);
        // k = ceil((256/37) ln 256) = 39 for n = 8, delta = 2.
        let net = random_net_hamming(8, 2, 11).unwrap();
        assert_eq!(net.centers.len(), 39);
        assert!(net.certified_cover);
        // Degenerate resolution is rejected.
        assert!(random_net_hamming(1, 0, 11).is_err());
    }
}
