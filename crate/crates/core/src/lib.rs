//! Workbench for information-theoretic limits on learning and estimation:
//! concentration inequalities, metric entropy, generalization bounds, and
//! Fano-based minimax lower bounds, each paired with Monte Carlo simulation
//! and brute-force oracles at desk scale.

// Negated comparisons like `!(x > 0.0)` are load-bearing here: they
// reject NaN inputs, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod concentration;
pub mod entropy;
pub mod infogen;
pub mod learning;
pub mod minimax;
pub mod error;
pub mod quad;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
