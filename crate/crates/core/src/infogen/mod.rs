//! Mutual-information generalization bounds, the Gibbs algorithm, and
//! PAC-Bayes bounds, with exact oracles on finite instances.
//!
//! All information quantities in this module are in nats; conversion to bits
//! happens only at the presentation layer.

mod bounds;
mod finite;
mod gibbs;
mod mcmc;

pub use bounds::{
    dv_variational_check, gaussian_mean_individual_mi, mi_gen_bound, pac_bayes_bound,
    plugin_mi_binned, simulate_mean_pairs, DvReport, MiBoundSource,
};
pub use finite::{
    argmin_learner, exact_expected_generalization, exact_mutual_information, gibbs_learner,
    kl_pmf, mc_expected_generalization, neighbor_posterior_kl_max, FiniteInstance,
    FinitePosterior, MiExact,
};
pub use gibbs::{
    gibbs_finite, gibbs_gaussian_mean, gibbs_gen_bound, gibbs_grid, gibbs_risk_exact_mc,
    gibbs_risk_overhead, kl_gaussian_vs_standard, kl_posterior_prior_finite, log_partition_finite,
    log_partition_grid, pac_bayes_coverage, GaussianPosterior, GridDensity, RiskOverhead,
};
pub use mcmc::{metropolis_sample, McmcConfig, McmcDiagnostics, McmcRun};
