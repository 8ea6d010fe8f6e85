//! Random-walk Metropolis sampler for Gibbs posteriors without closed forms.

use crate::error::{domain, Result};
use crate::rng::stream_rng;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McmcConfig {
    pub dim: usize,
    pub beta: f64,
    pub burn_in: u64,
    pub samples: u64,
    pub thin: u64,
    pub seed: u64,
}

impl McmcConfig {
    /// Burn-in floor: 10 d ceil(beta) steps.
    pub fn min_burn_in(dim: usize, beta: f64) -> u64 {
        10 * dim as u64 * beta.ceil().max(1.0) as u64
    }
}

/// Diagnostics recorded with every run: post-tuning acceptance rate, the
/// frozen proposal scale, and a batch-means effective-sample proxy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McmcDiagnostics {
    pub acceptance_rate: f64,
    pub proposal_scale: f64,
    pub ess_proxy: f64,
}

#[derive(Debug, Clone)]
pub struct McmcRun {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
    /// Batch-means standard error of each posterior mean coordinate.
    pub mean_std_error: Vec<f64>,
    /// Batch-means standard error of each posterior variance coordinate.
    pub variance_std_error: Vec<f64>,
    pub kept: u64,
    pub diagnostics: McmcDiagnostics,
}

/// Random-walk Metropolis targeting `exp(log_target)`. The proposal scale is
/// tuned toward 0.3-0.5 acceptance during burn-in, then frozen.
pub fn metropolis_sample(
    log_target: impl Fn(&[f64]) -> f64,
    config: &McmcConfig,
) -> Result<McmcRun> {
    if config.dim == 0 {
        return Err(domain("dimension must be >= 1"));
    }
    if config.samples < 100 {
        return Err(domain("need at least 100 retained samples"));
    }
    let min_burn = McmcConfig::min_burn_in(config.dim, config.beta);
    if config.burn_in < min_burn {
        return Err(domain(format!(
            "burn-in {} is below the floor {min_burn} for dim {} and beta {}",
            config.burn_in, config.dim, config.beta
        )));
    }
    let thin = config.thin.max(1);
    let mut rng = stream_rng(config.seed, 0);
    let mut state = vec![0.0f64; config.dim];
    let mut log_p = log_target(&state);
    let mut scale = 1.0f64;

    // Burn-in with adaptation in windows of 100 proposals.
    let mut window_accepts = 0u32;
    for step in 0..config.burn_in {
        if propose(&log_target, &mut state, &mut log_p, scale, &mut rng) {
            window_accepts += 1;
        }
        if (step + 1) % 100 == 0 {
            let rate = window_accepts as f64 / 100.0;
            if rate > 0.5 {
                scale *= 1.3;
            } else if rate < 0.3 {
                scale /= 1.3;
            }
            window_accepts = 0;
        }
    }

    // Sampling with the frozen scale.
    let kept = config.samples;
    let mut accepts = 0u64;
    let mut chain: Vec<Vec<f64>> = Vec::with_capacity(kept as usize);
    for _ in 0..kept {
        for _ in 0..thin {
            if propose(&log_target, &mut state, &mut log_p, scale, &mut rng) {
                accepts += 1;
            }
        }
        chain.push(state.clone());
    }

    let d = config.dim;
    let nf = kept as f64;
    let mut mean = vec![0.0; d];
    for x in &chain {
        for (m, &v) in mean.iter_mut().zip(x) {
            *m += v / nf;
        }
    }
    let mut variance = vec![0.0; d];
    for x in &chain {
        for k in 0..d {
            variance[k] += (x[k] - mean[k]).powi(2) / (nf - 1.0);
        }
    }

    // Batch means over ~sqrt(n) batches for autocorrelation-aware errors.
    let batches = (nf.sqrt() as usize).clamp(10, 200);
    let batch_len = (kept as usize / batches).max(1);
    let used = batches * batch_len;
    let mut mean_se = vec![0.0; d];
    let mut var_se = vec![0.0; d];
    let mut ess_total = 0.0;
    for k in 0..d {
        let mut bm = Vec::with_capacity(batches);
        let mut bv = Vec::with_capacity(batches);
        for b in 0..batches {
            let chunk = &chain[b * batch_len..(b + 1) * batch_len];
            let m: f64 = chunk.iter().map(|x| x[k]).sum::<f64>() / batch_len as f64;
            let v: f64 =
                chunk.iter().map(|x| (x[k] - mean[k]).powi(2)).sum::<f64>() / batch_len as f64;
            bm.push(m);
            bv.push(v);
        }
        let spread = |vals: &[f64]| -> f64 {
            let mu = vals.iter().sum::<f64>() / vals.len() as f64;
            let var =
                vals.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / (vals.len() - 1) as f64;
            (var / vals.len() as f64).sqrt()
        };
        mean_se[k] = spread(&bm);
        var_se[k] = spread(&bv);
        // ESS proxy: chain variance over batch-mean variance, per coordinate.
        let bm_var = mean_se[k].powi(2) * batches as f64;
        if bm_var > 0.0 {
            ess_total += variance[k] / (bm_var * batch_len as f64) * used as f64;
        }
    }
    let diagnostics = McmcDiagnostics {
        acceptance_rate: accepts as f64 / (kept * thin) as f64,
        proposal_scale: scale,
        ess_proxy: ess_total / d as f64,
    };
    Ok(McmcRun {
        mean,
        variance,
        mean_std_error: mean_se,
        variance_std_error: var_se,
        kept,
        diagnostics,
    })
}

fn propose(
    log_target: &impl Fn(&[f64]) -> f64,
    state: &mut [f64],
    log_p: &mut f64,
    scale: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> bool {
    let proposal: Vec<f64> = state
        .iter()
        .map(|&x| x + scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let log_q = log_target(&proposal);
    if log_q >= *log_p || rng.random::<f64>().ln() < log_q - *log_p {
        state.copy_from_slice(&proposal);
        *log_p = log_q;
        true
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burn_in_floor_is_enforced() {
        let config = McmcConfig {
            dim: 2,
            beta: 3.0,
            burn_in: 10,
            samples: 1000,
            thin: 1,
            seed: 4,
        };
        assert!(metropolis_sample(|_| 0.0, &config).is_err());
    }

    #[test]
    fn standard_normal_moments_within_batch_errors() {
        let config = McmcConfig {
            dim: 1,
            beta: 1.0,
            burn_in: 2_000,
            samples: 40_000,
            thin: 2,
            seed: 11,
        };
        let run = metropolis_sample(|w| -0.5 * w[0] * w[0], &config).unwrap();
        assert!(run.mean[0].abs() <= 4.0 * run.mean_std_error[0].max(1e-3));
        assert!((run.variance[0] - 1.0).abs() <= 4.0 * run.variance_std_error[0].max(1e-2));
        assert!(run.diagnostics.acceptance_rate > 0.15);
        assert!(run.diagnostics.ess_proxy > 100.0);
    }

    #[test]
    fn runs_are_deterministic_per_seed() {
        let config = McmcConfig {
            dim: 2,
            beta: 1.0,
            burn_in: 500,
            samples: 500,
            thin: 1,
            seed: 7,
        };
        let target = |w: &[f64]| -0.5 * (w[0] * w[0] + 2.0 * w[1] * w[1]);
        let a = metropolis_sample(target, &config).unwrap();
        let b = metropolis_sample(target, &config).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.diagnostics.acceptance_rate, b.diagnostics.acceptance_rate);
    }
}
