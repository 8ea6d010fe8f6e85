//! Minimax lower bounds: divergence kernels, the estimation-to-testing
//! reduction, Fano's inequality, and the local/global Fano pipelines with
//! constructive packing certificates.
//!
//! Formulas in this module follow the base-2 convention; divergences are
//! computed in nats internally and converted at the formula boundary, with
//! the conversion recorded in every report.

mod divergence;
mod fano;
mod pipelines;
mod testing;

pub use divergence::{
    hellinger_kl_inequality_check, hellinger_sq, kl_gaussian_location, kl_grid_density,
    total_variation, HellingerKlReport,
};
pub use fano::{
    fano_error_lower, global_fano_bound, local_fano_bound, FanoInstance, LossShape, MinimaxReport,
};
pub use pipelines::{
    density_packing_pipeline, gaussian_mean_pipeline, nonlinear_regression_pipeline,
    DensityAudit, GaussianMeanReference, RegressionConstants,
};
pub use testing::{
    binary_test_minimax, testing_reduction_sim, BinaryTestResult, ReductionEstimator,
    ReductionReport,
};
