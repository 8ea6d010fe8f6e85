//! Covering and packing machinery: exact brute-force numbers for small
//! finite spaces, greedy constructions, analytic bound formulas for the named
//! spaces, and rate-distortion comparisons. Metric entropy is reported in
//! bits; every bound value carries its log base.

mod bounds;
mod exact;
mod gv;
mod lipschitz;
mod nets;
mod space;
mod volume;

pub use bounds::{analytic_entropy_bounds, rd_compare, EntropyBounds, EntropyFamily, RdComparison, RdSource};
pub use exact::{
    covering_number_with_budget, CoverOutcome,
    exact_covering_number, exact_covering_number_budgeted, exact_packing_number,
    exact_packing_number_budgeted, DEFAULT_EXACT_LIMIT, DEFAULT_NODE_BUDGET,
};
pub use gv::{gv_hypercube_packing, GvPackingReport};
pub use lipschitz::{lipschitz_packing_family, sup_distance, PiecewiseLinearFn};
pub use nets::{greedy_net, greedy_net_with_order, random_net_hamming, GreedyOrder, NetResult};
pub use space::{FiniteMetricSpace, PackingResult};
pub use volume::{hamming_volume, hamming_volume_f64, log2_biguint};
