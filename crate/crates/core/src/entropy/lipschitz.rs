//! Sign-pattern packings of Lipschitz functions on the unit interval.

use crate::error::{domain, size, Result};
use crate::rng::stream_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Piecewise linear function on [0,1] with f(0) = 0 and slope `sign * l` on
/// each of m equal subintervals. Its Lipschitz constant is exactly `l` and
/// the sup distance between two members is attained at a breakpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearFn {
    l: f64,
    signs: Vec<i8>,
}

impl PiecewiseLinearFn {
    pub fn new(l: f64, signs: Vec<i8>) -> Result<Self> {
        if !(l > 0.0) {
            return Err(domain("slope magnitude must be positive"));
        }
        if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(domain("signs must be a nonempty vector over {-1, +1}"));
        }
        Ok(PiecewiseLinearFn { l, signs })
    }

    pub fn pieces(&self) -> usize {
        self.signs.len()
    }

    pub fn lipschitz_constant(&self) -> f64 {
        self.l
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.signs.iter().map(|&s| s as f64 * self.l).collect()
    }

    /// Breakpoints 0, 1/m, ..., 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        let m = self.pieces();
        (0..=m).map(|j| j as f64 / m as f64).collect()
    }

    /// Values at the breakpoints; starts at 0 by construction.
    pub fn values_at_breakpoints(&self) -> Vec<f64> {
        let m = self.pieces();
        let step = self.l / m as f64;
        let mut values = Vec::with_capacity(m + 1);
        let mut v = 0.0;
        values.push(v);
        for &s in &self.signs {
            v += s as f64 * step;
            values.push(v);
        }
        values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let m = self.pieces();
        let t = t.clamp(0.0, 1.0);
        let j = ((t * m as f64).floor() as usize).min(m - 1);
        let values = self.values_at_breakpoints();
        values[j] + self.signs[j] as f64 * self.l * (t - j as f64 / m as f64)
    }
}

/// Exact sup distance between two members over the same breakpoint grid.
pub fn sup_distance(a: &PiecewiseLinearFn, b: &PiecewiseLinearFn) -> f64 {
    assert_eq!(a.pieces(), b.pieces(), "functions must share a grid");
    a.values_at_breakpoints()
        .iter()
        .zip(b.values_at_breakpoints())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// The 2 delta-separated family {phi_beta} with m = floor(L/delta) pieces.
///
/// All 2^m sign patterns are built when m <= 16; beyond that, a seeded
/// sample of at most 2^16 distinct patterns is returned.
pub fn lipschitz_packing_family(
    l: f64,
    delta: f64,
    seed: u64,
) -> Result<Vec<PiecewiseLinearFn>> {
    if !(l > 0.0) {
        return Err(domain("Lipschitz constant must be positive"));
    }
    if !(delta > 0.0 && delta < l) {
        return Err(domain(format!(
            "resolution must satisfy 0 < delta < L, got delta = {delta}, L = {l}"
        )));
    }
    let m = (l / delta).floor() as u64;
    if m > 48 {
        return Err(size(format!("m = floor(L/delta) = {m} exceeds the supported 48 pieces")));
    }
    let m = m as usize;
    let patterns: Vec<u64> = if m <= 16 {
        (0u64..(1 << m)).collect()
    } else {
        let cap = 1usize << 16;
        let mut rng = stream_rng(seed, 0);
        let mut chosen = BTreeSet::new();
        while chosen.len() < cap {
            chosen.insert(rng.random::<u64>() & ((1 << m) - 1));
        }
        chosen.into_iter().collect()
    };
    Ok(patterns
        .into_iter()
        .map(|bits| {
            let signs = (0..m)
                .map(|j| if (bits >> j) & 1 == 1 { 1i8 } else { -1 })
                .collect();
            PiecewiseLinearFn { l, signs }
        })
        .collect())
}
