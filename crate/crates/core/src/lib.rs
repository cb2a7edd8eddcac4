//! Information-criterion model selection for linear regression and
//! autoregression.
//!
//! A model with `k` free parameters is scored by `H + (k/2)·d_n` where `H`
//! is a negated log-likelihood and `d_n` a penalty sequence (AIC, BIC,
//! Hannan-Quinn or custom). The crate provides
//!
//! * [`numkernel`]: Householder least squares, Gaussian elimination and χ²
//!   special functions,
//! * [`penalty`]: penalty sequences,
//! * [`lr_select`]: subset selection in regression,
//! * [`ar_select`]: Yule-Walker / Durbin-Levinson AR order selection,
//! * [`overestimation`]: closed-form overestimation probabilities,
//! * [`simlab`]: seeded Monte Carlo experiments.
//!
//! The numerical modules are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ar_select;
pub mod error;
pub mod lr_select;
pub mod numkernel;
pub mod overestimation;
pub mod penalty;
pub mod scalar;
pub mod simlab;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Matrix = numkernel::Mat<f64>;
pub type Matrix32 = numkernel::Mat<f32>;
pub type Penalty = penalty::PenaltySequence<f64>;
pub type Dataset = lr_select::RegressionDataset<f64>;
pub type Dataset32 = lr_select::RegressionDataset<f32>;
pub type Selection = lr_select::SelectionResult<f64>;
pub type Series = ar_select::ArSeries<f64>;
pub type Series32 = ar_select::ArSeries<f32>;
pub type Autocovariances = ar_select::AutocovarianceTable<f64>;
pub type YuleWalker = ar_select::YuleWalkerSolution<f64>;
pub type OrderSelection = ar_select::ArSelection<f64>;
pub type Query = overestimation::OverestimationQuery<f64>;
