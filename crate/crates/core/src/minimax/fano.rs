//! Fano's inequality and the local/global Fano minimax lower bounds.

use super::divergence::kl_gaussian_location;
use crate::error::{domain, Error, Result};
use crate::report::LogBase;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Nondecreasing loss shape `Phi` with `Phi(0) = 0`, applied to the
/// parameter metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossShape {
    Square,
    Absolute,
}

impl LossShape {
    pub fn eval(&self, a: f64) -> f64 {
        match self {
            LossShape::Square => a * a,
            LossShape::Absolute => a.abs(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LossShape::Square => "square",
            LossShape::Absolute => "absolute",
        }
    }
}

/// A hypothesis-testing instance: a certified 2 delta-packing of the
/// parameter space with its pairwise divergence matrix.
#[derive(Debug, Clone)]
pub struct FanoInstance {
    pub label: String,
    /// Packing members in parameter space.
    pub params: Vec<Vec<f64>>,
    /// Certified minimum pairwise metric distance.
    pub separation: f64,
    /// Pairwise relative entropies in nats (zero diagonal).
    pub divergences_nats: Vec<Vec<f64>>,
    /// Sample count of the testing experiment.
    pub n: u64,
    pub kind: FanoKind,
}

#[derive(Debug, Clone)]
pub enum FanoKind {
    GaussianLocation { sigma2: f64 },
    FiniteAlphabet { pmfs: Vec<Vec<f64>> },
}

impl FanoInstance {
    /// Gaussian-location instance under the Euclidean parameter metric; the
    /// separation is certified by scanning all pairs.
    pub fn gaussian_location(params: Vec<Vec<f64>>, sigma2: f64, n: u64) -> Result<Self> {
        if params.len() < 2 {
            return Err(domain("need at least two hypotheses"));
        }
        if n == 0 {
            return Err(domain("need n >= 1"));
        }
        let m = params.len();
        let mut separation = f64::INFINITY;
        let mut divergences = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in (i + 1)..m {
                let dist: f64 = params[i]
                    .iter()
                    .zip(&params[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if dist <= 0.0 {
                    return Err(Error::Certification(format!(
                        "hypotheses {i} and {j} coincide"
                    )));
                }
                separation = separation.min(dist);
                let kl = kl_gaussian_location(&params[i], &params[j], sigma2)?;
                divergences[i][j] = kl;
                divergences[j][i] = kl;
            }
        }
        Ok(FanoInstance {
            label: format!("gauss-location:k{}:m{}", params[0].len(), m),
            params,
            separation,
            divergences_nats: divergences,
            n,
            kind: FanoKind::GaussianLocation { sigma2 },
        })
    }

    /// Finite-alphabet instance: hypothesis j samples from pmfs[j]. The
    /// parameter metric is the discrete metric, so the packing separation
    /// is 1.
    pub fn finite_alphabet(pmfs: Vec<Vec<f64>>, n: u64) -> Result<Self> {
        if pmfs.len() < 2 {
            return Err(domain("need at least two hypotheses"));
        }
        let m = pmfs.len();
        let mut divergences = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    divergences[i][j] = crate::infogen::kl_pmf(&pmfs[i], &pmfs[j]);
                }
            }
        }
        let params = (0..m).map(|j| vec![j as f64]).collect();
        Ok(FanoInstance {
            label: format!("finite-alphabet:m{m}"),
            params,
            separation: 1.0,
            divergences_nats: divergences,
            n,
            kind: FanoKind::FiniteAlphabet { pmfs },
        })
    }

    pub fn hypotheses(&self) -> usize {
        self.params.len()
    }

    /// Average pairwise divergence bound on the mutual information,
    /// `(n/m^2) sum_{j,j'} D(p_j || p_j')`, in bits.
    pub fn mi_upper_bits(&self) -> f64 {
        let m = self.hypotheses() as f64;
        let total: f64 = self.divergences_nats.iter().flatten().sum();
        self.n as f64 / (m * m) * total / std::f64::consts::LN_2
    }
}

/// Fano lower bound on the testing error: `max(0, 1 - (I + 1)/log m)` with
/// the information and the logarithm in the same base (the additive constant
/// is one bit, i.e. ln 2 nats).
pub fn fano_error_lower(information: f64, m: usize, base: LogBase) -> Result<f64> {
    if m < 2 {
        return Err(domain("need at least two hypotheses"));
    }
    if !(information >= 0.0) {
        return Err(domain("information must be >= 0"));
    }
    let (unit, log_m) = match base {
        LogBase::Two => (1.0, (m as f64).log2()),
        LogBase::E => (std::f64::consts::LN_2, (m as f64).ln()),
    };
    Ok((1.0 - (information + unit) / log_m).max(0.0))
}

/// Minimax lower bound components: `lower = Phi(delta) max(0, error_lower)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinimaxReport {
    pub lower_bound: f64,
    pub phi_delta: f64,
    pub error_prob_lower: f64,
    pub mi_upper_bits: f64,
    pub parameters: BTreeMap<String, f64>,
}

impl MinimaxReport {
    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }
}

/// Local Fano bound from a 2 delta-packing with its divergence matrix.
pub fn local_fano_bound(
    instance: &FanoInstance,
    phi: LossShape,
    delta: f64,
) -> Result<MinimaxReport> {
    if !(delta > 0.0) {
        return Err(domain("delta must be positive"));
    }
    if instance.separation < 2.0 * delta - 1e-12 {
        return Err(Error::Certification(format!(
            "packing separation {} is below 2 delta = {}",
            instance.separation,
            2.0 * delta
        )));
    }
    let mi_upper = instance.mi_upper_bits();
    let error_lower = fano_error_lower(mi_upper, instance.hypotheses(), LogBase::Two)?;
    let phi_delta = phi.eval(delta);
    Ok(MinimaxReport {
        lower_bound: phi_delta * error_lower,
        phi_delta,
        error_prob_lower: error_lower,
        mi_upper_bits: mi_upper,
        parameters: BTreeMap::new(),
    }
    .with("m", instance.hypotheses() as f64)
    .with("n", instance.n as f64)
    .with("delta", delta)
    .with("kl_converted_from_nats", 1.0))
}

/// Global Fano bound from a relative-entropy covering:
/// `Phi(delta) max(0, 1 - (log K + n eps^2 + 1)/log M)`, base-2 logs with
/// eps^2 in bits.
pub fn global_fano_bound(
    log_k_bits: f64,
    log_m_bits: f64,
    n: u64,
    epsilon: f64,
    phi: LossShape,
    delta: f64,
) -> Result<MinimaxReport> {
    if !(log_m_bits > 0.0) {
        return Err(domain("log M must be positive"));
    }
    if !(log_k_bits >= 0.0) || !(epsilon >= 0.0) || !(delta > 0.0) {
        return Err(domain("need log K >= 0, epsilon >= 0, delta > 0"));
    }
    let information = log_k_bits + n as f64 * epsilon * epsilon;
    let error_lower = (1.0 - (information + 1.0) / log_m_bits).max(0.0);
    let phi_delta = phi.eval(delta);
    Ok(MinimaxReport {
        lower_bound: phi_delta * error_lower,
        phi_delta,
        error_prob_lower: error_lower,
        mi_upper_bits: information,
        parameters: BTreeMap::new(),
    }
    .with("log_k_bits", log_k_bits)
    .with("log_m_bits", log_m_bits)
    .with("n", n as f64)
    .with("epsilon", epsilon)
    .with("delta", delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    #[test]
    fn fano_error_values() {
        // The additive bit makes the two-hypothesis bound vacuous.
        assert_eq!(fano_error_lower(0.0, 2, LogBase::Two).unwrap(), 0.0);
        assert!((fano_error_lower(0.0, 1024, LogBase::Two).unwrap() - 0.9).abs() < 1e-15);
        // Information at log m clamps to zero.
        assert_eq!(fano_error_lower(10.0, 1024, LogBase::Two).unwrap(), 0.0);
        // Base-e route matches base-2 after conversion.
        let bits = fano_error_lower(2.5, 64, LogBase::Two).unwrap();
        let nats = fano_error_lower(2.5 * std::f64::consts::LN_2, 64, LogBase::E).unwrap();
        assert!((bits - nats).abs() < 1e-12);
        assert!(fano_error_lower(0.0, 1, LogBase::Two).is_err());
    }

    #[test]
    fn local_fano_with_identical_distributions() {
        // 1024 indistinguishable hypotheses: error lower bound 0.9.
        let params: Vec<Vec<f64>> = (0..1024)
            .map(|j| vec![(j % 32) as f64, (j / 32) as f64])
            .collect();
        let mut inst = FanoInstance::gaussian_location(params, 1.0, 1).unwrap();
        for row in inst.divergences_nats.iter_mut() {
            row.iter_mut().for_each(|d| *d = 0.0);
        }
        let rep = local_fano_bound(&inst, LossShape::Square, 0.5).unwrap();
        assert!((rep.error_prob_lower - 0.9).abs() < 1e-12);
        assert!((rep.lower_bound - 0.25 * 0.9).abs() < 1e-12);
        // m = 2 collapses to zero regardless of the divergences.
        let two = FanoInstance::gaussian_location(vec![vec![0.0], vec![1.0]], 1.0, 1).unwrap();
        let rep = local_fano_bound(&two, LossShape::Square, 0.5).unwrap();
        assert_eq!(rep.lower_bound, 0.0);
    }

    #[test]
    fn separation_certificate_is_enforced() {
        let inst =
            FanoInstance::gaussian_location(vec![vec![0.0], vec![0.5], vec![1.0]], 1.0, 1)
                .unwrap();
        assert!((inst.separation - 0.5).abs() < 1e-15);
        assert!(local_fano_bound(&inst, LossShape::Square, 0.26).is_err());
        assert!(local_fano_bound(&inst, LossShape::Square, 0.25).is_ok());
    }

    #[test]
    fn global_fano_reduces_to_plain_fano_at_zero_covering_cost() {
        let rep =
            global_fano_bound(0.0, 10.0, 5, 0.0, LossShape::Square, 2.0).unwrap();
        assert!((rep.error_prob_lower - 0.9).abs() < 1e-12);
        assert!((rep.lower_bound - 4.0 * 0.9).abs() < 1e-12);
        // n eps^2 >= log M clamps to zero.
        let rep = global_fano_bound(0.0, 10.0, 100, 0.5, LossShape::Square, 2.0).unwrap();
        assert_eq!(rep.lower_bound, 0.0);
        assert!(global_fano_bound(0.0, 0.0, 1, 0.0, LossShape::Square, 1.0).is_err());
    }

    #[test]
    fn mi_bound_dominates_plugin_estimate_on_finite_instance() {
        // Sanity direction: the averaged-divergence bound sits above a
        // plug-in mutual information estimate from simulation.
        let pmfs = vec![
            vec![0.6, 0.3, 0.1],
            vec![0.3, 0.4, 0.3],
            vec![0.2, 0.3, 0.5],
        ];
        let inst = FanoInstance::finite_alphabet(pmfs.clone(), 2).unwrap();
        let bound_bits = inst.mi_upper_bits();
        // Simulate (J, X^2) and estimate I by counting.
        let mut rng = stream_rng(5, 0);
        let trials = 400_000;
        let mut joint = vec![vec![0u64; 9]; 3];
        for _ in 0..trials {
            let j = (rng.random::<u64>() % 3) as usize;
            let mut xs = 0usize;
            for _ in 0..2 {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut x = 2;
                for (s, &p) in pmfs[j].iter().enumerate() {
                    acc += p;
                    if u < acc {
                        x = s;
                        break;
                    }
                }
                xs = xs * 3 + x;
            }
            joint[j][xs] += 1;
        }
        let nf = trials as f64;
        let mut mi = 0.0;
        let mut marginal = vec![0.0; 9];
        for row in &joint {
            for (x, &c) in row.iter().enumerate() {
                marginal[x] += c as f64 / nf;
            }
        }
        for row in &joint {
            let pj: f64 = row.iter().map(|&c| c as f64 / nf).sum();
            for (x, &c) in row.iter().enumerate() {
                let pjx = c as f64 / nf;
                if pjx > 0.0 {
                    mi += pjx * (pjx / (pj * marginal[x])).log2();
                }
            }
        }
        assert!(
            mi <= bound_bits + 0.02,
            "plug-in {mi} bits vs bound {bound_bits} bits"
        );
    }
}
