//! Empirical risk, ERM, the excess-risk decomposition, the loss pseudometric,
//! and the Monte Carlo worst-case generalization gap.

use super::problems::FiniteProblem;
use crate::error::{domain, Error, Result};
use crate::report::McEstimate;
use crate::rng::{for_each_trial, OnlineStats};

/// Average loss of a model over a dataset.
pub fn empirical_risk<Z, W>(w: &W, data: &[Z], loss: impl Fn(&Z, &W) -> f64) -> Result<f64> {
    if data.is_empty() {
        return Err(domain("empirical risk needs a nonempty dataset"));
    }
    Ok(data.iter().map(|z| loss(z, w)).sum::<f64>() / data.len() as f64)
}

/// ERM over an explicitly enumerated class; ties break to the lowest index.
pub fn erm_finite<Z, W>(
    models: &[W],
    data: &[Z],
    loss: impl Fn(&Z, &W) -> f64,
) -> Result<(usize, f64)> {
    if models.is_empty() {
        return Err(domain("model class must be nonempty"));
    }
    let mut best = (0usize, f64::INFINITY);
    for (i, w) in models.iter().enumerate() {
        let r = empirical_risk(w, data, &loss)?;
        if r < best.1 {
            best = (i, r);
        }
    }
    Ok(best)
}

/// Least squares with the solution radially projected onto the ball of
/// radius r (the class constraint).
#[allow(clippy::needless_range_loop)]
pub fn erm_linear_regressor(
    xs: &[Vec<f64>],
    ys: &[f64],
    radius: f64,
) -> Result<(Vec<f64>, f64)> {
    if xs.is_empty() || xs.len() != ys.len() {
        return Err(domain("need matching nonempty xs and ys"));
    }
    if !(radius > 0.0) {
        return Err(domain("radius must be positive"));
    }
    let d = xs[0].len();
    if xs.iter().any(|x| x.len() != d) {
        return Err(domain("all feature vectors must share a dimension"));
    }
    // Normal equations with partial pivoting.
    let mut a = vec![vec![0.0; d + 1]; d];
    for (x, &y) in xs.iter().zip(ys) {
        for i in 0..d {
            for j in 0..d {
                a[i][j] += x[i] * x[j];
            }
            a[i][d] += x[i] * y;
        }
    }
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-12 {
            return Err(Error::Capability(
                "degenerate design matrix; least squares is not unique".into(),
            ));
        }
        a.swap(col, pivot);
        let p = a[col][col];
        for j in col..=d {
            a[col][j] /= p;
        }
        for r in 0..d {
            if r != col {
                let f = a[r][col];
                for j in col..=d {
                    a[r][j] -= f * a[col][j];
                }
            }
        }
    }
    let mut w: Vec<f64> = (0..d).map(|i| a[i][d]).collect();
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > radius {
        for v in w.iter_mut() {
            *v *= radius / norm;
        }
    }
    let risk = xs
        .iter()
        .zip(ys)
        .map(|(x, &y)| {
            let pred: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
            (y - pred).powi(2)
        })
        .sum::<f64>()
        / xs.len() as f64;
    Ok((w, risk))
}

/// Loss pseudometric `rho_n(w, w') = sqrt((1/n) sum |l(z_i,w) - l(z_i,w')|^2)`.
pub fn empirical_pseudometric<Z, W>(
    w: &W,
    w_prime: &W,
    data: &[Z],
    loss: impl Fn(&Z, &W) -> f64,
) -> Result<f64> {
    if data.is_empty() {
        return Err(domain("pseudometric needs a nonempty dataset"));
    }
    let sum: f64 = data
        .iter()
        .map(|z| (loss(z, w) - loss(z, w_prime)).powi(2))
        .sum();
    Ok((sum / data.len() as f64).sqrt())
}

/// The three-term excess-risk split of a learner output `w` against the
/// population optimum `w_star`: (generalization error, optimality gap,
/// fluctuation). The terms sum to the excess risk identically.
pub fn excess_risk_split(
    risk_w: f64,
    emp_w: f64,
    risk_star: f64,
    emp_star: f64,
) -> (f64, f64, f64) {
    (risk_w - emp_w, emp_w - emp_star, emp_star - risk_star)
}

/// Monte Carlo estimate of `E sup_w |L(w) - L_n(w)|` for a finite problem
/// with known true risks.
pub fn worst_case_gap_mc(
    problem: &FiniteProblem,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 || trials == 0 {
        return Err(domain("need n >= 1 and trials >= 1"));
    }
    let mut stats = OnlineStats::default();
    for_each_trial(seed, trials, |rng| {
        let data = problem.sample_dataset(n, rng);
        stats.push(problem.worst_gap(&data));
    });
    Ok(McEstimate {
        mean: stats.mean(),
        std_error: stats.std_error(),
        trials,
    })
}
