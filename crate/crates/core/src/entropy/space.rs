//! Finite metric spaces with explicit point sets.

use crate::error::{domain, size, Result};
use serde::{Deserialize, Serialize};

/// A finite (pseudo)metric space. Points are addressed by index; built-in
/// families compute distances on the fly so that spaces with up to 2^20
/// points stay representable.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    label: String,
    metric: MetricKind,
}

#[derive(Debug, Clone)]
enum MetricKind {
    /// {0,1}^bits under Hamming distance.
    HammingCube { bits: u32 },
    /// {0,1}^bits under Euclidean distance (sqrt of Hamming for 0/1 vectors).
    BinaryEuclid { bits: u32 },
    /// Explicit points in R^d under Euclidean distance.
    EuclidPoints { points: Vec<Vec<f64>> },
    /// Explicit symmetric distance matrix (pseudometrics allowed).
    Matrix { n: usize, d: Vec<f64> },
}

impl FiniteMetricSpace {
    pub fn hamming_cube(bits: u32) -> Result<Self> {
        if bits == 0 || bits > 24 {
            return Err(size(format!("hamming cube supports 1..=24 bits, got {bits}")));
        }
        Ok(FiniteMetricSpace {
            label: format!("hamming:{bits}"),
            metric: MetricKind::HammingCube { bits },
        })
    }

    /// Binary strings as vertices of the Euclidean unit-coordinate cube.
    pub fn binary_euclid(bits: u32) -> Result<Self> {
        if bits == 0 || bits > 24 {
            return Err(size(format!("cube2 supports 1..=24 bits, got {bits}")));
        }
        Ok(FiniteMetricSpace {
            label: format!("cube2:{bits}"),
            metric: MetricKind::BinaryEuclid { bits },
        })
    }

    /// Lattice discretization of the unit ball: `side` points per axis on
    /// [-1, 1]^dim, keeping points with Euclidean norm <= 1.
    pub fn euclid_grid(dim: u32, side: u32) -> Result<Self> {
        if dim == 0 || side < 2 {
            return Err(domain(format!("euclid-grid needs dim >= 1 and side >= 2, got {dim}:{side}")));
        }
        let total = (side as u64).checked_pow(dim).filter(|&t| t <= 1 << 22);
        if total.is_none() {
            return Err(size(format!("euclid-grid {dim}:{side} has too many lattice points")));
        }
        let mut points = Vec::new();
        let mut idx = vec![0u32; dim as usize];
        loop {
            let p: Vec<f64> = idx
                .iter()
                .map(|&i| -1.0 + 2.0 * i as f64 / (side - 1) as f64)
                .collect();
            if p.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12 {
                points.push(p);
            }
            let mut k = 0;
            loop {
                if k == dim as usize {
                    let label = format!("euclid-grid:{dim}:{side}");
                    if points.is_empty() {
                        return Err(domain("euclid-grid produced no points inside the ball"));
                    }
                    return Ok(FiniteMetricSpace {
                        label,
                        metric: MetricKind::EuclidPoints { points },
                    });
                }
                idx[k] += 1;
                if idx[k] < side {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn from_points(label: &str, points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(domain("point set must be nonempty"));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(domain("all points must share a dimension"));
        }
        Ok(FiniteMetricSpace {
            label: label.to_string(),
            metric: MetricKind::EuclidPoints { points },
        })
    }

    /// Explicit matrix; checks symmetry, zero diagonal, nonnegativity, and
    /// the triangle inequality (all triples up to 64 points, sampled above).
    pub fn from_matrix(label: &str, n: usize, d: Vec<f64>) -> Result<Self> {
        if n == 0 || d.len() != n * n {
            return Err(domain("matrix must be n x n with n >= 1"));
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(domain(format!("distance({i},{i}) must be 0")));
            }
            for j in 0..n {
                let v = d[i * n + j];
                if !(v >= 0.0) {
                    return Err(domain(format!("distance({i},{j}) = {v} is negative or NaN")));
                }
                if (v - d[j * n + i]).abs() > 1e-12 {
                    return Err(domain(format!("distance({i},{j}) is not symmetric")));
                }
            }
        }
        let check_triple = |i: usize, j: usize, k: usize| -> Result<()> {
            if d[i * n + j] > d[i * n + k] + d[k * n + j] + 1e-9 {
                return Err(domain(format!(
                    "triangle inequality violated on triple ({i},{j},{k})"
                )));
            }
            Ok(())
        };
        if n <= 64 {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        check_triple(i, j, k)?;
                    }
                }
            }
        } else {
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..20_000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let i = (state >> 33) as usize % n;
                let j = (state >> 17) as usize % n;
                let k = state as usize % n;
                check_triple(i, j, k)?;
            }
        }
        Ok(FiniteMetricSpace {
            label: label.to_string(),
            metric: MetricKind::Matrix { n, d },
        })
    }

    /// Parse a built-in space name: `hamming:n`, `cube2:n`, `euclid-grid:d:side`.
    pub fn parse_name(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split(':').collect();
        let bad = || domain(format!("unknown space name {name:?}"));
        match parts.as_slice() {
            ["hamming", n] => Self::hamming_cube(n.parse().map_err(|_| bad())?),
            ["cube2", n] => Self::binary_euclid(n.parse().map_err(|_| bad())?),
            ["euclid-grid", d, s] => {
                Self::euclid_grid(d.parse().map_err(|_| bad())?, s.parse().map_err(|_| bad())?)
            }
            _ => Err(bad()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        match &self.metric {
            MetricKind::HammingCube { bits } | MetricKind::BinaryEuclid { bits } => 1usize << bits,
            MetricKind::EuclidPoints { points } => points.len(),
            MetricKind::Matrix { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when XOR translation is an isometry (the binary-cube families).
    /// Exact searches exploit it to fix one point without loss of generality.
    pub fn is_translation_invariant(&self) -> bool {
        matches!(
            self.metric,
            MetricKind::HammingCube { .. } | MetricKind::BinaryEuclid { .. }
        )
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            MetricKind::HammingCube { .. } => ((i ^ j) as u64).count_ones() as f64,
            MetricKind::BinaryEuclid { .. } => (((i ^ j) as u64).count_ones() as f64).sqrt(),
            MetricKind::EuclidPoints { points } => {
                let (p, q) = (&points[i], &points[j]);
                p.iter()
                    .zip(q)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            }
            MetricKind::Matrix { n, d } => d[i * n + j],
        }
    }

    /// Largest pairwise distance (O(n^2); intended for small spaces).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.max(self.distance(i, j));
            }
        }
        best
    }
}

/// A delta-packing: member indices with pairwise distances strictly above
/// `separation`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PackingResult {
    pub members: Vec<usize>,
    pub separation: f64,
    pub space_label: String,
}

impl PackingResult {
    /// Check the strict pairwise-separation invariant against a space.
    pub fn verify(&self, space: &FiniteMetricSpace) -> bool {
        for (a, &i) in self.members.iter().enumerate() {
            for &j in &self.members[a + 1..] {
                if space.distance(i, j) <= self.separation {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_cube_distances() {
        let s = FiniteMetricSpace::hamming_cube(3).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.distance(0b000, 0b111), 3.0);
        assert_eq!(s.distance(0b101, 0b100), 1.0);
        assert_eq!(s.distance(5, 5), 0.0);
        assert_eq!(s.diameter(), 3.0);
    }

    #[test]
    fn binary_euclid_is_sqrt_of_hamming() {
        let s = FiniteMetricSpace::binary_euclid(4).unwrap();
        assert!((s.distance(0b0000, 0b1111) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn euclid_grid_stays_in_ball() {
        let s = FiniteMetricSpace::euclid_grid(2, 5).unwrap();
        assert!(s.len() > 4);
        for i in 0..s.len() {
            assert!(s.distance(0, i) <= 2.0 + 1e-9);
        }
    }

    #[test]
    fn matrix_validation_catches_violations() {
        // Asymmetric.
        assert!(FiniteMetricSpace::from_matrix("bad", 2, vec![0.0, 1.0, 2.0, 0.0]).is_err());
        // Triangle violation: d(0,2) = 5 > d(0,1) + d(1,2) = 2.
        let d = vec![0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0];
        assert!(FiniteMetricSpace::from_matrix("bad", 3, d).is_err());
        // Pseudometric (zero distance between distinct points) is allowed.
        let d = vec![0.0, 0.0, 0.0, 0.0];
        assert!(FiniteMetricSpace::from_matrix("pseudo", 2, d).is_ok());
    }

    #[test]
    fn parse_names() {
        assert_eq!(FiniteMetricSpace::parse_name("hamming:4").unwrap().len(), 16);
        assert_eq!(FiniteMetricSpace::parse_name("cube2:3").unwrap().len(), 8);
        assert!(FiniteMetricSpace::parse_name("euclid-grid:2:5").is_ok());
        assert!(FiniteMetricSpace::parse_name("nope:1").is_err());
    }
}
