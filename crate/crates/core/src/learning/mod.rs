//! Learning-theoretic machinery: empirical risk and ERM, worst-case
//! generalization gaps, Rademacher complexity, data-dependent entropy bounds,
//! shatter coefficients, and VC tools.

mod bounds;
mod linear;
mod problems;
mod rademacher;
mod risk;
mod vc;

pub use bounds::{
    entropy_gen_bound, finite_class_bound, lipschitz_class_bound, sauer_bound, vc_entropy,
    vc_gen_bound,
};
pub use linear::{
    erm_linear_classifier, halfspace_labelings, shatter_coefficient_finite,
    shatter_coefficient_halfspaces, LinearErm,
};
pub use problems::{
    halfspace2d_sampler, linreg_bounded_dataset, linreg_rademacher_bound, FiniteProblem,
    LinregData,
};
pub use rademacher::{rademacher_exact, rademacher_mc, singleton_rademacher_exact};
pub use risk::{
    empirical_pseudometric, empirical_risk, erm_finite, erm_linear_regressor, excess_risk_split,
    worst_case_gap_mc,
};
pub use vc::{vc_dimension_search, VcCertificate};
