//! Exhaustive sign-pattern enumeration for homogeneous halfspace classifiers
//! `x -> 1{w . x >= 0}` in up to four dimensions.
//!
//! Optimal separating hyperplanes can be rotated until they pass through
//! d - 1 sample points, so the realizable labelings are enumerated from the
//! null directions of all small point subsets. Points lying exactly on a
//! candidate hyperplane are resolved by a deterministic infinitesimal
//! rotation: each candidate carries a first-order perturbation and labels are
//! read lexicographically, which keeps degenerate configurations exact.

use crate::error::{domain, Error, Result};
use std::collections::BTreeSet;

const MAX_DIM: usize = 4;
const MAX_POINTS: usize = 20;
const EPS_RANK: f64 = 1e-9;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A hyperplane normal with a first-order rotation; the label of x is the
/// sign of `base . x`, falling back to the sign of `tilt . x` on ties, with
/// exact zero mapping to label 1.
#[derive(Debug, Clone)]
struct SymbolicNormal {
    base: Vec<f64>,
    tilt: Vec<f64>,
}

impl SymbolicNormal {
    fn label(&self, x: &[f64], scale: f64) -> bool {
        let s = dot(&self.base, x);
        if s.abs() > EPS_RANK * scale {
            return s > 0.0;
        }
        let t = dot(&self.tilt, x);
        if t.abs() > EPS_RANK * scale {
            return t > 0.0;
        }
        true // w . x = 0 exactly labels 1
    }

    /// Collapse to a concrete weight vector realizing the same labeling.
    fn concrete(&self, points: &[Vec<f64>], scale: f64) -> Vec<f64> {
        let mut eps = 1.0;
        'retry: for _ in 0..60 {
            let w: Vec<f64> = self
                .base
                .iter()
                .zip(&self.tilt)
                .map(|(b, t)| b + eps * t)
                .collect();
            for x in points {
                let s = dot(&w, x);
                let want = self.label(x, scale);
                if (s >= 0.0) != want {
                    eps *= 0.25;
                    continue 'retry;
                }
            }
            return w;
        }
        self.base.clone()
    }
}

/// Orthonormal basis of the null space of the span of `rows` (each of
/// dimension d), via Gram-Schmidt on the row space.
fn null_space_basis(rows: &[&[f64]], d: usize) -> Vec<Vec<f64>> {
    let mut span: Vec<Vec<f64>> = Vec::new();
    for &row in rows {
        let mut v = row.to_vec();
        for b in &span {
            let c = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > EPS_RANK {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            span.push(v);
        }
    }
    // Complete to a basis of R^d; the leftovers span the null space.
    let mut null = Vec::new();
    for k in 0..d {
        let mut v = vec![0.0; d];
        v[k] = 1.0;
        for b in span.iter().chain(null.iter()) {
            let c = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > EPS_RANK {
            for vi in v.iter_mut() {
                *vi /= norm;
            }
            null.push(v);
        }
    }
    null
}

/// Dual vectors inside span{rows}: tilde_i with tilde_i . row_j = delta_ij.
/// Returns None when the rows are dependent (the subset is redundant).
fn dual_basis(rows: &[&[f64]]) -> Option<Vec<Vec<f64>>> {
    let k = rows.len();
    let d = rows[0].len();
    // Solve the Gram system G c = e_i for each i.
    let mut g = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in 0..k {
            g[i][j] = dot(rows[i], rows[j]);
        }
    }
    let mut inv = vec![vec![0.0; k]; k];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    // Gauss-Jordan with partial pivoting on the Gram matrix.
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&a, &b| g[a][col].abs().total_cmp(&g[b][col].abs()))
            .unwrap();
        if g[pivot][col].abs() < EPS_RANK {
            return None;
        }
        g.swap(col, pivot);
        inv.swap(col, pivot);
        let p = g[col][col];
        for j in 0..k {
            g[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..k {
            if r != col {
                let f = g[r][col];
                for j in 0..k {
                    g[r][j] -= f * g[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    let mut duals = Vec::with_capacity(k);
    for c in inv.iter() {
        let mut v = vec![0.0; d];
        for (ci, row) in c.iter().zip(rows) {
            for (vj, rj) in v.iter_mut().zip(*row) {
                *vj += ci * rj;
            }
        }
        duals.push(v);
    }
    Some(duals)
}

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for size in 1..=k.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        'combos: loop {
            out.push(idx.clone());
            let mut i = size;
            while i > 0 {
                i -= 1;
                if idx[i] < n - size + i {
                    idx[i] += 1;
                    for j in (i + 1)..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    continue 'combos;
                }
            }
            break;
        }
    }
    out
}

fn candidate_normals(points: &[Vec<f64>], d: usize) -> Vec<SymbolicNormal> {
    let mut candidates = Vec::new();
    // Axis directions cover point sets smaller than d - 1.
    for k in 0..d {
        for sign in [1.0, -1.0] {
            let mut base = vec![0.0; d];
            base[k] = sign;
            candidates.push(SymbolicNormal {
                base,
                tilt: vec![0.0; d],
            });
        }
    }
    for subset in subsets_up_to(points.len(), d - 1) {
        if subset.is_empty() {
            continue;
        }
        let rows: Vec<&[f64]> = subset.iter().map(|&i| points[i].as_slice()).collect();
        let Some(duals) = dual_basis(&rows) else {
            continue; // dependent subset; its independent core is enumerated separately
        };
        let null = null_space_basis(&rows, d);
        for u in &null {
            for u_sign in [1.0, -1.0] {
                let base: Vec<f64> = u.iter().map(|x| u_sign * x).collect();
                // Every way of rotating the touching points off the plane.
                for mask in 0..(1u32 << subset.len()) {
                    let mut tilt = vec![0.0; d];
                    for (bit, dual) in duals.iter().enumerate() {
                        let s = if (mask >> bit) & 1 == 1 { 1.0 } else { -1.0 };
                        for (t, dv) in tilt.iter_mut().zip(dual) {
                            *t += s * dv;
                        }
                    }
                    candidates.push(SymbolicNormal {
                        base: base.clone(),
                        tilt,
                    });
                }
            }
        }
    }
    candidates
}

fn check_inputs(points: &[Vec<f64>]) -> Result<usize> {
    if points.is_empty() {
        return Err(domain("point set must be nonempty"));
    }
    let d = points[0].len();
    if d == 0 || d > MAX_DIM {
        return Err(Error::Capability(format!(
            "halfspace enumeration supports 1..={MAX_DIM} dimensions, got {d}"
        )));
    }
    if points.len() > MAX_POINTS {
        return Err(Error::Size(format!(
            "halfspace enumeration supports up to {MAX_POINTS} points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|p| p.len() != d) {
        return Err(domain("all points must share a dimension"));
    }
    Ok(d)
}

/// All labelings realizable on `points` by homogeneous halfspaces, as
/// bitmasks (bit i set means point i labeled 1).
pub fn halfspace_labelings(points: &[Vec<f64>]) -> Result<Vec<u32>> {
    let d = check_inputs(points)?;
    let scale = points
        .iter()
        .map(|p| dot(p, p).sqrt())
        .fold(1.0f64, f64::max);
    let mut seen = BTreeSet::new();
    for cand in candidate_normals(points, d) {
        let mut mask = 0u32;
        for (i, x) in points.iter().enumerate() {
            if cand.label(x, scale) {
                mask |= 1 << i;
            }
        }
        seen.insert(mask);
    }
    Ok(seen.into_iter().collect())
}

/// Number of distinct labelings and whether the point set is shattered.
pub fn shatter_coefficient_halfspaces(points: &[Vec<f64>]) -> Result<(usize, bool)> {
    let count = halfspace_labelings(points)?.len();
    Ok((count, count == 1usize << points.len()))
}

/// Shatter count for an explicitly enumerated classifier class: callers
/// evaluate every classifier on the points and pass the label bitmasks.
pub fn shatter_coefficient_finite(labelings: &[u32], n_points: usize) -> Result<(usize, bool)> {
    if n_points > 20 {
        return Err(Error::Size(format!(
            "shatter counting supports up to 20 points, got {n_points}"
        )));
    }
    let mask = if n_points == 32 { u32::MAX } else { (1u32 << n_points) - 1 };
    let distinct: BTreeSet<u32> = labelings.iter().map(|&m| m & mask).collect();
    Ok((distinct.len(), distinct.len() == 1usize << n_points))
}

/// ERM result for a homogeneous linear classifier.
#[derive(Debug, Clone)]
pub struct LinearErm {
    pub weights: Vec<f64>,
    pub empirical_risk: f64,
    pub labeling: u32,
}

/// Exhaustive ERM for the 0-1 loss over homogeneous halfspaces. Ties are
/// broken toward the lexicographically smallest labeling bitmask.
pub fn erm_linear_classifier(points: &[Vec<f64>], labels: &[bool]) -> Result<LinearErm> {
    let d = check_inputs(points)?;
    if labels.len() != points.len() {
        return Err(domain("labels must match points"));
    }
    let scale = points
        .iter()
        .map(|p| dot(p, p).sqrt())
        .fold(1.0f64, f64::max);
    let want: u32 = labels
        .iter()
        .enumerate()
        .map(|(i, &y)| (y as u32) << i)
        .sum();
    let mut best: Option<(u32, u32, SymbolicNormal)> = None;
    for cand in candidate_normals(points, d) {
        let mut mask = 0u32;
        for (i, x) in points.iter().enumerate() {
            if cand.label(x, scale) {
                mask |= 1 << i;
            }
        }
        let errors = (mask ^ want).count_ones();
        let better = match &best {
            None => true,
            Some((be, bm, _)) => errors < *be || (errors == *be && mask < *bm),
        };
        if better {
            best = Some((errors, mask, cand));
        }
    }
    let (errors, labeling, cand) = best.expect("candidate set is never empty");
    Ok(LinearErm {
        weights: cand.concrete(points, scale),
        empirical_risk: errors as f64 / points.len() as f64,
        labeling,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_single_point_cases() {
        // One generic point admits both labels.
        let pts = vec![vec![1.0, 0.3]];
        let (count, shattered) = shatter_coefficient_halfspaces(&pts).unwrap();
        assert_eq!(count, 2);
        assert!(shattered);
    }

    #[test]
    fn three_generic_points_with_bias_are_shattered() {
        // Bias-coordinate convention: x = (1, t1, t2); homogeneous halfspaces
        // of R^3 realize all 8 labelings of 3 generic points.
        let pts = vec![
            vec![1.0, 0.2, 0.7],
            vec![1.0, -0.9, 0.1],
            vec![1.0, 0.4, -0.6],
        ];
        let (count, shattered) = shatter_coefficient_halfspaces(&pts).unwrap();
        assert_eq!(count, 8);
        assert!(shattered);
    }

    #[test]
    fn two_dim_homogeneous_never_shatters_three() {
        // Central arrangements of 3 lines in the plane have at most 6 cells.
        let pts = vec![vec![1.0, 0.1], vec![-0.3, 1.0], vec![0.8, -0.5]];
        let (count, shattered) = shatter_coefficient_halfspaces(&pts).unwrap();
        assert!(count < 8);
        assert!(!shattered);
        // Two generic points in the plane are shattered.
        let (c2, s2) = shatter_coefficient_halfspaces(&pts[..2].to_vec()).unwrap();
        assert_eq!(c2, 4);
        assert!(s2);
    }

    #[test]
    fn labelings_match_dense_direction_sampling() {
        // Oracle: sample many unit directions and collect labelings; the
        // enumeration must contain all of them (it may contain more, from
        // boundary-resolved patterns the sampling misses).
        let pts = vec![
            vec![1.0, 0.33, -0.21],
            vec![1.0, -0.72, 0.64],
            vec![1.0, 0.05, 0.91],
            vec![1.0, -0.44, -0.83],
            vec![1.0, 0.58, 0.17],
        ];
        let enumerated: std::collections::BTreeSet<u32> =
            halfspace_labelings(&pts).unwrap().into_iter().collect();
        let mut sampled = std::collections::BTreeSet::new();
        let mut state = 0x243f6a8885a308d3u64;
        let mut rand = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..60_000 {
            let w = [rand(), rand(), rand()];
            let mut mask = 0u32;
            for (i, x) in pts.iter().enumerate() {
                if w[0] * x[0] + w[1] * x[1] + w[2] * x[2] >= 0.0 {
                    mask |= 1 << i;
                }
            }
            sampled.insert(mask);
        }
        for mask in &sampled {
            assert!(enumerated.contains(mask), "missing labeling {mask:#b}");
        }
    }

    #[test]
    fn erm_separates_separable_data() {
        // Six linearly separable points in the plane (bias included).
        let pts = vec![
            vec![1.0, 1.0, 0.2],
            vec![1.0, 0.8, 0.9],
            vec![1.0, 0.9, -0.4],
            vec![1.0, -1.0, 0.1],
            vec![1.0, -0.7, 0.8],
            vec![1.0, -0.8, -0.6],
        ];
        let labels = vec![true, true, true, false, false, false];
        let erm = erm_linear_classifier(&pts, &labels).unwrap();
        assert_eq!(erm.empirical_risk, 0.0);
        // The concrete witness reproduces the labeling.
        for (i, x) in pts.iter().enumerate() {
            let s: f64 = erm.weights.iter().zip(x).map(|(a, b)| a * b).sum();
            assert_eq!(s >= 0.0, labels[i]);
        }
    }

    #[test]
    fn finite_class_shatter_counts() {
        // Constant classifiers realize at most two labelings.
        let constants = [0u32, 0b111];
        let (count, shattered) = shatter_coefficient_finite(&constants, 3).unwrap();
        assert_eq!(count, 2);
        assert!(!shattered);
        // Zero points: the single empty labeling, trivially shattered.
        let (count, shattered) = shatter_coefficient_finite(&constants, 0).unwrap();
        assert_eq!(count, 1);
        assert!(shattered);
        // A two-model class certifies at most one point.
        let (count, _) = shatter_coefficient_finite(&[0b0, 0b1], 1).unwrap();
        assert_eq!(count, 2);
    }

    #[test]
    fn degenerate_duplicate_points_are_handled() {
        let pts = vec![vec![1.0, 0.5], vec![1.0, 0.5], vec![-1.0, 0.2]];
        let (count, shattered) = shatter_coefficient_halfspaces(&pts).unwrap();
        // Duplicates always share a label: 2^3 is impossible.
        assert!(!shattered);
        assert!(count >= 2);
    }
}
