//! Finite learning instances small enough for exact enumeration: the data
//! alphabet, the loss table, and the prior are explicit, so mutual
//! information, posteriors, and expected generalization errors are computed
//! without sampling error.

use crate::error::{domain, size, Result};
use crate::report::McEstimate;
use crate::rng::{for_each_trial, OnlineStats};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Budget on |Z|^n * |W| for exact dataset enumeration.
const ENUM_BUDGET: u64 = 10_000_000;

/// KL divergence between finite pmfs in nats; infinite when p has mass where
/// q has none.
pub fn kl_pmf(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "pmfs must share a support");
    let mut acc = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return f64::INFINITY;
            }
            acc += pi * (pi / qi).ln();
        }
    }
    acc.max(0.0)
}

/// A finite data distribution, loss table, and prior over models.
#[derive(Debug, Clone)]
pub struct FiniteInstance {
    z_pmf: Vec<f64>,
    /// loss[z][w]
    loss: Vec<Vec<f64>>,
    prior: Vec<f64>,
}

fn check_pmf(p: &[f64], what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(domain(format!("{what} must be nonempty")));
    }
    if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(domain(format!("{what} entries must be finite and >= 0")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(domain(format!("{what} must sum to 1, got {total}")));
    }
    Ok(())
}

impl FiniteInstance {
    pub fn new(z_pmf: Vec<f64>, loss: Vec<Vec<f64>>, prior: Vec<f64>) -> Result<Self> {
        check_pmf(&z_pmf, "data pmf")?;
        check_pmf(&prior, "prior")?;
        if loss.len() != z_pmf.len() {
            return Err(domain("loss table must have one row per data outcome"));
        }
        let w = prior.len();
        if loss.iter().any(|row| row.len() != w) {
            return Err(domain("loss rows must match the number of models"));
        }
        if loss.iter().flatten().any(|&l| !(l >= 0.0) || !l.is_finite()) {
            return Err(domain("losses must be finite and >= 0"));
        }
        Ok(FiniteInstance { z_pmf, loss, prior })
    }

    /// Binary data with a [0,1] loss table: the workhorse test instance.
    pub fn binary_default() -> Self {
        FiniteInstance::new(
            vec![0.35, 0.65],
            vec![vec![0.0, 1.0, 0.3, 0.55], vec![1.0, 0.0, 0.7, 0.45]],
            vec![0.25; 4],
        )
        .expect("static instance is valid")
    }

    pub fn z_card(&self) -> usize {
        self.z_pmf.len()
    }

    pub fn w_card(&self) -> usize {
        self.prior.len()
    }

    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn z_pmf(&self) -> &[f64] {
        &self.z_pmf
    }

    pub fn loss(&self, z: usize, w: usize) -> f64 {
        self.loss[z][w]
    }

    pub fn max_loss(&self) -> f64 {
        self.loss.iter().flatten().fold(0.0f64, |m, &l| m.max(l))
    }

    pub fn true_risk(&self, w: usize) -> f64 {
        self.z_pmf
            .iter()
            .zip(&self.loss)
            .map(|(&p, row)| p * row[w])
            .sum()
    }

    pub fn empirical_risk(&self, data: &[usize], w: usize) -> f64 {
        data.iter().map(|&z| self.loss[z][w]).sum::<f64>() / data.len() as f64
    }

    pub fn sample_z(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (z, &p) in self.z_pmf.iter().enumerate() {
            acc += p;
            if u < acc {
                return z;
            }
        }
        self.z_pmf.len() - 1
    }

    pub fn sample_dataset(&self, n: u64, rng: &mut ChaCha8Rng) -> Vec<usize> {
        (0..n).map(|_| self.sample_z(rng)).collect()
    }

    pub fn dataset_prob(&self, data: &[usize]) -> f64 {
        data.iter().map(|&z| self.z_pmf[z]).product()
    }

    fn check_enum_budget(&self, n: u64) -> Result<u64> {
        let total = (self.z_card() as u64)
            .checked_pow(n as u32)
            .filter(|t| t.saturating_mul(self.w_card() as u64) <= ENUM_BUDGET);
        total.ok_or_else(|| {
            size(format!(
                "|Z|^n |W| exceeds the enumeration budget {ENUM_BUDGET} for n = {n}"
            ))
        })
    }

    /// Visit every dataset of length n with its probability.
    fn for_each_dataset(&self, n: u64, mut body: impl FnMut(&[usize], f64)) {
        let zc = self.z_card();
        let mut data = vec![0usize; n as usize];
        loop {
            body(&data, self.dataset_prob(&data));
            let mut i = 0;
            loop {
                if i == data.len() {
                    return;
                }
                data[i] += 1;
                if data[i] < zc {
                    break;
                }
                data[i] = 0;
                i += 1;
            }
        }
    }
}

/// A randomized learner over a finite instance: an exact conditional pmf of
/// the model given the dataset.
type PosteriorFn = Box<dyn Fn(&[usize]) -> Vec<f64> + Send + Sync>;

pub struct FinitePosterior {
    pub w_card: usize,
    posterior: PosteriorFn,
}

impl FinitePosterior {
    pub fn new(
        w_card: usize,
        posterior: impl Fn(&[usize]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        FinitePosterior {
            w_card,
            posterior: Box::new(posterior),
        }
    }

    /// Posterior row; asserts it is a probability vector.
    pub fn row(&self, data: &[usize]) -> Vec<f64> {
        let row = (self.posterior)(data);
        debug_assert!(
            (row.iter().sum::<f64>() - 1.0).abs() < 1e-9,
            "posterior row must sum to 1"
        );
        row
    }
}

/// The Gibbs learner `p(w | z^n) prop exp(-beta L_n(w)) pi(w)` as an exact
/// finite posterior.
pub fn gibbs_learner(inst: &FiniteInstance, beta: f64) -> Result<FinitePosterior> {
    if !(beta >= 0.0) {
        return Err(domain("inverse temperature must be >= 0"));
    }
    let inst = inst.clone();
    Ok(FinitePosterior::new(inst.w_card(), move |data| {
        super::gibbs::gibbs_finite_raw(&inst, beta, data)
    }))
}

/// Deterministic ERM as a degenerate learner (ties break low); its mutual
/// information with the data equals the entropy of the selected index.
pub fn argmin_learner(inst: &FiniteInstance) -> FinitePosterior {
    let inst = inst.clone();
    FinitePosterior::new(inst.w_card(), move |data| {
        let mut best = 0usize;
        let mut best_risk = f64::INFINITY;
        for w in 0..inst.w_card() {
            let r = inst.empirical_risk(data, w);
            if r < best_risk {
                best_risk = r;
                best = w;
            }
        }
        let mut row = vec![0.0; inst.w_card()];
        row[best] = 1.0;
        row
    })
}

/// Exact mutual information between the learner output and the dataset.
#[derive(Debug, Clone)]
pub struct MiExact {
    /// I(W; Z^n) in nats.
    pub joint_nats: f64,
    /// I(W; Z_i) for each coordinate, in nats.
    pub per_sample_nats: Vec<f64>,
    /// Marginal model distribution under the joint experiment.
    pub w_marginal: Vec<f64>,
}

pub fn exact_mutual_information(
    inst: &FiniteInstance,
    learner: &FinitePosterior,
    n: u64,
) -> Result<MiExact> {
    if n == 0 {
        return Err(domain("need n >= 1"));
    }
    inst.check_enum_budget(n)?;
    let wc = learner.w_card;
    let zc = inst.z_card();
    // Sweep 1: marginal of W and the (i, z_i, w) joint tables.
    let mut w_marginal = vec![0.0; wc];
    let mut joint_iz = vec![vec![vec![0.0; wc]; zc]; n as usize];
    inst.for_each_dataset(n, |data, prob| {
        let row = learner.row(data);
        for w in 0..wc {
            let mass = prob * row[w];
            w_marginal[w] += mass;
            for (i, &z) in data.iter().enumerate() {
                joint_iz[i][z][w] += mass;
            }
        }
    });
    // Sweep 2: I(W; Z^n) = E_{z^n} KL(p(w|z^n) || p(w)).
    let mut joint_nats = 0.0;
    inst.for_each_dataset(n, |data, prob| {
        if prob > 0.0 {
            let row = learner.row(data);
            joint_nats += prob * kl_pmf(&row, &w_marginal);
        }
    });
    let per_sample_nats = joint_iz
        .iter()
        .map(|table| {
            let mut mi = 0.0;
            for (z, row) in table.iter().enumerate() {
                for (w, &pzw) in row.iter().enumerate() {
                    if pzw > 0.0 {
                        mi += pzw * (pzw / (inst.z_pmf[z] * w_marginal[w])).ln();
                    }
                }
            }
            mi.max(0.0)
        })
        .collect();
    Ok(MiExact {
        joint_nats: joint_nats.max(0.0),
        per_sample_nats,
        w_marginal,
    })
}

/// Exact expected generalization error `E(L(W) - L_n(W))` by enumeration.
pub fn exact_expected_generalization(
    inst: &FiniteInstance,
    learner: &FinitePosterior,
    n: u64,
) -> Result<f64> {
    if n == 0 {
        return Err(domain("need n >= 1"));
    }
    inst.check_enum_budget(n)?;
    let mut acc = 0.0;
    inst.for_each_dataset(n, |data, prob| {
        if prob > 0.0 {
            let row = learner.row(data);
            for (w, &pw) in row.iter().enumerate() {
                acc += prob * pw * (inst.true_risk(w) - inst.empirical_risk(data, w));
            }
        }
    });
    Ok(acc)
}

/// Monte Carlo expected generalization error: datasets are sampled, the
/// posterior expectation per dataset is exact.
pub fn mc_expected_generalization(
    inst: &FiniteInstance,
    learner: &FinitePosterior,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n == 0 || trials == 0 {
        return Err(domain("need n >= 1 and trials >= 1"));
    }
    let mut stats = OnlineStats::default();
    for_each_trial(seed, trials, |rng| {
        let data = inst.sample_dataset(n, rng);
        let row = learner.row(&data);
        let mut g = 0.0;
        for (w, &pw) in row.iter().enumerate() {
            g += pw * (inst.true_risk(w) - inst.empirical_risk(&data, w));
        }
        stats.push(g);
    });
    Ok(McEstimate {
        mean: stats.mean(),
        std_error: stats.std_error(),
        trials,
    })
}

/// Largest posterior KL over all single-coordinate dataset perturbations,
/// by full enumeration (the stability quantity of the bounded-difference
/// mutual-information bound).
pub fn neighbor_posterior_kl_max(
    inst: &FiniteInstance,
    learner: &FinitePosterior,
    n: u64,
) -> Result<f64> {
    if n == 0 {
        return Err(domain("need n >= 1"));
    }
    inst.check_enum_budget(n)?;
    let zc = inst.z_card();
    let mut worst = 0.0f64;
    inst.for_each_dataset(n, |data, _| {
        let row = learner.row(data);
        let mut neighbor = data.to_vec();
        for i in 0..data.len() {
            let original = neighbor[i];
            for replacement in 0..zc {
                if replacement != original {
                    neighbor[i] = replacement;
                    let other = learner.row(&neighbor);
                    worst = worst.max(kl_pmf(&row, &other));
                }
            }
            neighbor[i] = original;
        }
    });
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn copy_channel_instance() -> FiniteInstance {
        // W copies Z_1: two models, the loss table is irrelevant to the
        // learner below.
        FiniteInstance::new(
            vec![0.5, 0.5],
            vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![0.5, 0.5],
        )
        .unwrap()
    }

    #[test]
    fn data_ignoring_learner_has_zero_information() {
        let inst = FiniteInstance::binary_default();
        let learner = FinitePosterior::new(4, |_| vec![0.25; 4]);
        let mi = exact_mutual_information(&inst, &learner, 3).unwrap();
        assert!(mi.joint_nats.abs() < 1e-12);
        assert!(mi.per_sample_nats.iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn copy_channel_information_is_ln_two() {
        let inst = copy_channel_instance();
        let learner = FinitePosterior::new(2, |data: &[usize]| {
            let mut row = vec![0.0, 0.0];
            row[data[0]] = 1.0;
            row
        });
        let mi = exact_mutual_information(&inst, &learner, 1).unwrap();
        assert!((mi.joint_nats - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn majority_of_three_fair_bits_is_ln_two() {
        let inst = copy_channel_instance();
        let learner = FinitePosterior::new(2, |data: &[usize]| {
            let ones = data.iter().sum::<usize>();
            let mut row = vec![0.0, 0.0];
            row[(ones * 2 > data.len()) as usize] = 1.0;
            row
        });
        let mi = exact_mutual_information(&inst, &learner, 3).unwrap();
        // W is a deterministic fair bit: I(W; Z^3) = H(W) = ln 2.
        assert!((mi.joint_nats - std::f64::consts::LN_2).abs() < 1e-12);
        // Each coordinate carries the same, strictly smaller share.
        for &i in &mi.per_sample_nats {
            assert!(i > 0.0 && i < std::f64::consts::LN_2);
            assert!((i - mi.per_sample_nats[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_guard_rejects_large_enumerations() {
        let inst = FiniteInstance::binary_default();
        let learner = FinitePosterior::new(4, |_| vec![0.25; 4]);
        assert!(exact_mutual_information(&inst, &learner, 40).is_err());
    }

    #[test]
    fn exact_and_mc_generalization_agree() {
        let inst = FiniteInstance::binary_default();
        let learner = gibbs_learner(&inst, 2.0).unwrap();
        let exact = exact_expected_generalization(&inst, &learner, 6).unwrap();
        let mc = mc_expected_generalization(&inst, &learner, 6, 60_000, 5).unwrap();
        assert!(
            (mc.mean - exact).abs() <= 3.0 * mc.std_error,
            "exact {exact} vs mc {} +- {}",
            mc.mean,
            mc.std_error
        );
    }

    #[test]
    fn kl_pmf_cases() {
        assert_eq!(kl_pmf(&[0.5, 0.5], &[0.5, 0.5]), 0.0);
        assert!((kl_pmf(&[0.75, 0.25], &[0.5, 0.5]) - 0.13081203594113697).abs() < 1e-15);
        assert!(kl_pmf(&[0.5, 0.5], &[1.0, 0.0]).is_infinite());
    }
}
