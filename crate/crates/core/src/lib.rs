//! Coverage analysis of RIS-aided NOMA downlinks in Poisson cellular
//! networks.
//!
//! Two engines compute the same coverage probabilities: [`analytic`]
//! evaluates the closed forms and [`mcsim`] estimates them by sampling full
//! network realizations.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod mcsim;
pub mod params;
pub mod sgkernel;

pub use error::{Error, Result};
pub use params::NetworkParams;
