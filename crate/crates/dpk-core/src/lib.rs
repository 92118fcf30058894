//! Analytic layer for noncolliding Brownian motion viewed as a determinantal
//! process: heat/Hermite/Airy/Bessel special functions, Karlin-McGregor
//! transition densities in the Weyl chamber, the four extended matrix-kernels,
//! and multitime correlation functions with their Fredholm generating
//! functions.
//!
//! Everything in this crate is a pure function of its arguments; the crate is
//! `no_std` (with `alloc`) and carries no IO. Monte Carlo samplers, file
//! formats and the command-line front end live in the companion `dpk` crate.

#![no_std]
// frozen oracle constants keep their full printed precision, and float
// guards are written as negated comparisons so NaN arguments fail them
#![allow(clippy::excessive_precision)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corr;
mod error;
pub mod kernels;
pub mod linalg;
pub mod quad;
pub mod specfun;
pub mod weylkm;

pub use error::{Error, Result};
