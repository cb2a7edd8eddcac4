//! Dense linear algebra and special functions.
//!
//! Least squares goes through a Householder QR factorization; the n×n
//! projection matrices that appear in the analysis are never formed here.

mod linsolve;
mod lstsq;
mod matrix;
mod special;

pub use linsolve::solve_dense;
pub use lstsq::{least_squares, rss_difference, LeastSquares};
pub use matrix::Mat;
pub use special::{chi2_pdf, chi2_survival, log_gamma, regularized_gamma_q};
