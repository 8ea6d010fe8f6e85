//! Synthetic learning problems with known population quantities, used by the
//! Monte Carlo harnesses and the CLI.

use crate::error::{domain, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Finite model class with independent Bernoulli losses: sample z is the
/// vector of per-model losses, model w observes bit w. The true risk of
/// model w is its Bernoulli mean, so every population quantity is exact.
#[derive(Debug, Clone)]
pub struct FiniteProblem {
    loss_means: Vec<f64>,
}

impl FiniteProblem {
    pub fn new(loss_means: Vec<f64>) -> Result<Self> {
        if loss_means.is_empty() || loss_means.len() > 32 {
            return Err(domain("need between 1 and 32 models"));
        }
        if loss_means.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            return Err(domain("Bernoulli loss means must lie in [0, 1]"));
        }
        Ok(FiniteProblem { loss_means })
    }

    /// k models with means evenly spaced across [0.2, 0.8].
    pub fn evenly_spaced(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(domain("need at least 2 models"));
        }
        let means = (0..k)
            .map(|i| 0.2 + 0.6 * i as f64 / (k - 1) as f64)
            .collect();
        FiniteProblem::new(means)
    }

    pub fn models(&self) -> usize {
        self.loss_means.len()
    }

    pub fn true_risk(&self, w: usize) -> f64 {
        self.loss_means[w]
    }

    pub fn best_model(&self) -> usize {
        let mut best = 0;
        for i in 1..self.loss_means.len() {
            if self.loss_means[i] < self.loss_means[best] {
                best = i;
            }
        }
        best
    }

    /// One sample: the loss bits of every model, packed into a mask.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> u32 {
        let mut mask = 0u32;
        for (w, &p) in self.loss_means.iter().enumerate() {
            if rng.random::<f64>() < p {
                mask |= 1 << w;
            }
        }
        mask
    }

    pub fn sample_dataset(&self, n: u64, rng: &mut ChaCha8Rng) -> Vec<u32> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    pub fn loss(&self, z: u32, w: usize) -> f64 {
        ((z >> w) & 1) as f64
    }

    pub fn empirical_risk(&self, data: &[u32], w: usize) -> f64 {
        let hits: u32 = data.iter().map(|&z| (z >> w) & 1).sum();
        hits as f64 / data.len() as f64
    }

    /// sup over models of |L(w) - L_n(w)| on a dataset.
    pub fn worst_gap(&self, data: &[u32]) -> f64 {
        (0..self.models())
            .map(|w| (self.true_risk(w) - self.empirical_risk(data, w)).abs())
            .fold(0.0, f64::max)
    }

    /// Loss matrix with rows indexed by sample, columns by model.
    pub fn loss_matrix(&self, data: &[u32]) -> Vec<Vec<f64>> {
        data.iter()
            .map(|&z| (0..self.models()).map(|w| self.loss(z, w)).collect())
            .collect()
    }
}

/// Labeled planar features with a bias coordinate: x = (1, t1, t2) with
/// t ~ N(0, I), labeled by a fixed halfspace and flipped with the given
/// noise probability.
pub fn halfspace2d_sampler(
    noise: f64,
    rng: &mut ChaCha8Rng,
) -> (Vec<f64>, bool) {
    let true_w = [0.25, 1.0, -0.5];
    let t1: f64 = rng.sample(StandardNormal);
    let t2: f64 = rng.sample(StandardNormal);
    let x = vec![1.0, t1, t2];
    let clean = true_w[0] * x[0] + true_w[1] * x[1] + true_w[2] * x[2] >= 0.0;
    let label = if rng.random::<f64>() < noise { !clean } else { clean };
    (x, label)
}

/// Bounded regression data for the linear-regression complexity bound:
/// features on the sphere of radius `x_scale`, targets clipped to `y_max`.
#[derive(Debug, Clone)]
pub struct LinregData {
    pub xs: Vec<Vec<f64>>,
    pub ys: Vec<f64>,
}

pub fn linreg_bounded_dataset(
    n: u64,
    dim: usize,
    x_scale: f64,
    y_max: f64,
    rng: &mut ChaCha8Rng,
) -> Result<LinregData> {
    if n == 0 || dim == 0 {
        return Err(domain("need n >= 1 and dim >= 1"));
    }
    if !(x_scale > 0.0 && y_max > 0.0) {
        return Err(domain("scales must be positive"));
    }
    let true_w: Vec<f64> = (0..dim).map(|i| if i % 2 == 0 { 0.5 } else { -0.25 }).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for _ in 0..n {
        let mut x: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        for v in x.iter_mut() {
            *v *= x_scale / norm;
        }
        let clean: f64 = true_w.iter().zip(&x).map(|(a, b)| a * b).sum();
        let y = (clean + 0.1 * rng.sample::<f64, _>(StandardNormal)).clamp(-y_max, y_max);
        xs.push(x);
        ys.push(y);
    }
    Ok(LinregData { xs, ys })
}

/// Tight empirical Rademacher bound for bounded linear regression:
/// `(4b/n)(sqrt(sum y_i^2) + r sqrt(sum |x_i|^2))`, requiring
/// `b >= max|y| + r max|x|`.
pub fn linreg_rademacher_bound(data: &LinregData, r: f64, b: f64) -> Result<f64> {
    if data.xs.is_empty() {
        return Err(domain("dataset must be nonempty"));
    }
    let max_y = data.ys.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let max_x = data
        .xs
        .iter()
        .map(|x| x.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    let needed = max_y + r * max_x;
    if b < needed - 1e-12 {
        return Err(domain(format!(
            "b = {b} is below the required prediction-error range {needed}"
        )));
    }
    let n = data.xs.len() as f64;
    let sum_y2: f64 = data.ys.iter().map(|y| y * y).sum();
    let sum_x2: f64 = data
        .xs
        .iter()
        .map(|x| x.iter().map(|v| v * v).sum::<f64>())
        .sum();
    Ok(4.0 * b / n * (sum_y2.sqrt() + r * sum_x2.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn finite_problem_quantities() {
        let p = FiniteProblem::new(vec![0.4, 0.1]).unwrap();
        assert_eq!(p.best_model(), 1);
        let data = vec![0b01u32, 0b11, 0b00, 0b10];
        // Model 0 loses on samples 0 and 1; model 1 on samples 1 and 3.
        assert!((p.empirical_risk(&data, 0) - 0.5).abs() < 1e-15);
        assert!((p.empirical_risk(&data, 1) - 0.5).abs() < 1e-15);
        assert!((p.worst_gap(&data) - 0.4).abs() < 1e-15);
        assert!(FiniteProblem::new(vec![1.4]).is_err());
    }

    #[test]
    fn sampling_matches_means() {
        let p = FiniteProblem::evenly_spaced(4).unwrap();
        let mut rng = stream_rng(7, 0);
        let data = p.sample_dataset(40_000, &mut rng);
        for w in 0..4 {
            let emp = p.empirical_risk(&data, w);
            assert!(
                (emp - p.true_risk(w)).abs() < 0.02,
                "model {w}: {emp} vs {}",
                p.true_risk(w)
            );
        }
    }

    #[test]
    fn linreg_bound_examples() {
        // Four identical scalar samples: (8/4)(2 + 2) = 8.
        let data = LinregData {
            xs: vec![vec![1.0]; 4],
            ys: vec![1.0; 4],
        };
        let b = linreg_rademacher_bound(&data, 1.0, 2.0).unwrap();
        assert!((b - 8.0).abs() < 1e-12);
        // Homogeneity: doubling data and b scales the bound by 4.
        let data2 = LinregData {
            xs: vec![vec![2.0]; 4],
            ys: vec![2.0; 4],
        };
        let b2 = linreg_rademacher_bound(&data2, 1.0, 4.0).unwrap();
        assert!((b2 - 4.0 * b).abs() < 1e-12);
        // Zero data gives a zero bound.
        let zero = LinregData {
            xs: vec![vec![0.0]; 3],
            ys: vec![0.0; 3],
        };
        assert_eq!(linreg_rademacher_bound(&zero, 1.0, 1.0).unwrap(), 0.0);
        // Too small b is rejected with the required minimum in the message.
        assert!(linreg_rademacher_bound(&data, 1.0, 1.5).is_err());
    }
}
