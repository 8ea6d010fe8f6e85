//! Closed-form generalization bound formulas.
//!
//! Logs are natural throughout: the finite-class bound is derived through the
//! maximal inequality, which is stated in nats. Reports carry the base tag.

use crate::error::{domain, Result};
use crate::report::{GenBoundReport, LogBase};

/// Worst-case expected generalization gap of a finite class:
/// `2 sigma sqrt(ln |W| / n)`.
pub fn finite_class_bound(sigma2: f64, class_size: usize, n: u64) -> Result<GenBoundReport> {
    if !(sigma2 > 0.0) {
        return Err(domain("sigma2 must be positive"));
    }
    if class_size < 2 {
        return Err(domain(format!(
            "finite-class bound needs |W| >= 2, got {class_size}"
        )));
    }
    if n == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    let value = 2.0 * sigma2.sqrt() * ((class_size as f64).ln() / n as f64).sqrt();
    Ok(GenBoundReport::new("finite_class", value, LogBase::E)
        .with("sigma2", sigma2)
        .with("class_size", class_size as f64)
        .with("n", n as f64))
}

fn minimize_over_grid(
    grid: &[f64],
    mut objective: impl FnMut(f64) -> f64,
) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(domain("delta grid must be nonempty"));
    }
    let mut best = (f64::INFINITY, f64::NAN);
    for &delta in grid {
        if !(delta > 0.0) {
            return Err(domain(format!("grid deltas must be positive, got {delta}")));
        }
        let v = objective(delta);
        if v < best.0 {
            best = (v, delta);
        }
    }
    Ok(best)
}

/// Entropy-based gap bound for a bounded loss: minimizes
/// `2 delta + 6 b sqrt(H(delta) / n)` over the grid. H is in nats.
pub fn entropy_gen_bound(
    b: f64,
    n: u64,
    entropy_curve: impl Fn(f64) -> f64,
    delta_grid: &[f64],
) -> Result<GenBoundReport> {
    if !(b > 0.0) {
        return Err(domain("loss range b must be positive"));
    }
    if n == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    let (value, delta) = minimize_over_grid(delta_grid, |d| {
        2.0 * d + 6.0 * b * (entropy_curve(d) / n as f64).sqrt()
    })?;
    Ok(GenBoundReport::new("entropy_gap", value, LogBase::E)
        .with("b", b)
        .with("n", n as f64)
        .with("minimizing_delta", delta))
}

/// Quantization bound under the Lipschitz loss condition: minimizes
/// `2 delta + 2 sigma sqrt(H(delta / c) / n)` over the grid. H is in nats.
pub fn lipschitz_class_bound(
    sigma: f64,
    c: f64,
    n: u64,
    entropy_curve: impl Fn(f64) -> f64,
    delta_grid: &[f64],
) -> Result<GenBoundReport> {
    if !(sigma > 0.0) || !(c > 0.0) {
        return Err(domain("sigma and c must be positive"));
    }
    if n == 0 {
        return Err(domain("sample count must be >= 1"));
    }
    let (value, delta) = minimize_over_grid(delta_grid, |d| {
        2.0 * d + 2.0 * sigma * (entropy_curve(d / c) / n as f64).sqrt()
    })?;
    Ok(GenBoundReport::new("lipschitz_quantization", value, LogBase::E)
        .with("sigma", sigma)
        .with("c", c)
        .with("n", n as f64)
        .with("minimizing_delta", delta))
}

/// Polynomial shatter-coefficient bound `(n e / d)^d`, valid for n >= d.
pub fn sauer_bound(d: u64, n: u64) -> Result<f64> {
    if d == 0 {
        return Err(domain("VC dimension must be >= 1"));
    }
    if n < d {
        return Err(domain(format!("sauer bound needs n >= d, got n = {n}, d = {d}")));
    }
    Ok((n as f64 * std::f64::consts::E / d as f64).powi(d as i32))
}

/// ERM excess-risk bound for a VC class: `c sqrt(d / n)`. The universal
/// constant is left unspecified by the theory; callers supply it (default 1).
pub fn vc_gen_bound(d: u64, n: u64, c: f64) -> Result<f64> {
    if d == 0 || n == 0 {
        return Err(domain("need d >= 1 and n >= 1"));
    }
    if !(c > 0.0) {
        return Err(domain("constant c must be positive"));
    }
    Ok(c * (d as f64 / n as f64).sqrt())
}

/// Metric entropy bound for a VC class: `c d ln(1/delta)` nats.
pub fn vc_entropy(d: u64, delta: f64, c: f64) -> Result<f64> {
    if d == 0 {
        return Err(domain("VC dimension must be >= 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(domain(format!("delta must lie in (0,1), got {delta}")));
    }
    if !(c > 0.0) {
        return Err(domain("constant c must be positive"));
    }
    Ok(c * d as f64 * (1.0 / delta).ln())
}
