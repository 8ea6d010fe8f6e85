//! Library surface of the command-line workbench: argument types, report
//! assembly, the operation dispatcher, and the verification suites.

// Negated comparisons like `!(x > 0.0)` are load-bearing here: they
// reject NaN inputs, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod report;
pub mod run;
pub mod verify;

pub use config::{CommonOpts, FileConfig};
pub use report::{emit, Report};
pub use run::{dispatch, Cli};
