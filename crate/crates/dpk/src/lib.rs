//! Monte Carlo layer and tooling around `dpk-core`: ensemble samplers that
//! independently validate the analytic formulas, ensemble file formats, and
//! the acceptance suite driven by both the test harness and `dpk verify`.

#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cli;
pub mod ensemble_io;
pub mod mcsim;

pub use dpk_core::{corr, kernels, linalg, quad, specfun, weylkm, Error, Result};
