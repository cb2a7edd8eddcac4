//! Closed-form overestimation quantities for nested linear models.
//!
//! For `π ⊋ π_*` with `dk = |π| − |π_*|`, the criterion prefers `π` exactly
//! when `(S(π_*) − S(π)) / (S(π_*)/n)` exceeds
//! `n·(1 − exp(−dk·d_n / (2n)))`. The statistic is asymptotically `χ²_dk`,
//! which gives the overestimation probability as a χ² upper tail.

use crate::error::{Error, Result};
use crate::numkernel::chi2_survival;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverestimationQuery<T> {
    n: T,
    dk: usize,
    d_n: T,
}

impl<T: Scalar> OverestimationQuery<T> {
    /// `n ≥ 1` (real-valued sizes are allowed), `dk ≥ 1`, `d_n ≥ 0`.
    pub fn new(n: T, dk: usize, d_n: T) -> Result<Self> {
        if !(n >= T::one()) || !n.is_finite() {
            return Err(Error::Domain(format!("n must be >= 1, got {n}")));
        }
        if dk == 0 {
            return Err(Error::Domain("dk must be >= 1".into()));
        }
        if !(d_n >= T::zero()) || !d_n.is_finite() {
            return Err(Error::Domain(format!("d_n must be finite and >= 0, got {d_n}")));
        }
        Ok(Self { n, dk, d_n })
    }

    pub fn n(&self) -> T {
        self.n
    }

    pub fn dk(&self) -> usize {
        self.dk
    }

    pub fn d_n(&self) -> T {
        self.d_n
    }

    fn scaled_penalty(&self) -> T {
        T::count(self.dk) * self.d_n
    }
}

/// `n·(1 − exp(−dk·d_n/(2n)))`, evaluated through `expm1`.
pub fn threshold<T: Scalar>(q: &OverestimationQuery<T>) -> T {
    let x = q.scaled_penalty() / (T::lit(2.0) * q.n);
    -q.n * (-x).exp_m1()
}

/// `P(χ²_dk ≥ threshold)`.
pub fn overestimation_probability<T: Scalar>(q: &OverestimationQuery<T>) -> T {
    chi2_survival(q.dk, threshold(q)).expect("threshold is finite and nonnegative")
}

/// `(dk·d_n/2 − (dk·d_n)²/(4n), dk·d_n/2)`, which brackets [`threshold`].
pub fn threshold_bounds<T: Scalar>(q: &OverestimationQuery<T>) -> (T, T) {
    let x = q.scaled_penalty();
    let upper = x / T::lit(2.0);
    let lower = upper - x * x / (T::lit(4.0) * q.n);
    (lower, upper)
}

/// Iterated-logarithm band `dk·ln ln n` for the statistic
/// `(S_p − S_q)/(S_p/n)`; requires `n ≥ 3`.
pub fn lil_band<T: Scalar>(n: T, dk: usize) -> Result<T> {
    if !(n >= T::lit(3.0)) || !n.is_finite() {
        return Err(Error::Domain(format!("lil_band requires n >= 3, got {n}")));
    }
    Ok(T::count(dk) * n.ln().ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn q(n: f64, dk: usize, d_n: f64) -> OverestimationQuery<f64> {
        OverestimationQuery::new(n, dk, d_n).unwrap()
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold(&q(50.0, 3, 0.0)), 0.0);
        assert!((threshold(&q(1e6, 1, 2.0)) - 1.0).abs() <= 1e-3);
        let t = threshold(&q(100.0, 2, 100f64.ln()));
        assert!((t - 100.0 * (1.0 - (-100f64.ln() / 100.0).exp())).abs() < 1e-12);
        assert!((t - 4.500_741_397_856_4).abs() < 1e-10);
    }

    #[test]
    fn threshold_has_no_cancellation() {
        // dk·d_n ≪ n: first-order value dk·d_n/2
        let t = threshold(&q(1e15, 1, 2e-3));
        assert!((t - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn probability_examples() {
        assert_eq!(overestimation_probability(&q(100.0, 1, 0.0)), 1.0);
        let p = overestimation_probability(&q(1e6, 1, 2.0));
        assert!((p - 0.317_310_5).abs() < 1e-6);
        let p2 = overestimation_probability(&q(1e6, 2, 2.0));
        assert!((p2 - (-1.0f64).exp()).abs() < 1e-6);
        let p3 = overestimation_probability(&q(100.0, 2, 100f64.ln()));
        assert!((p3 - (-threshold(&q(100.0, 2, 100f64.ln())) / 2.0).exp()).abs() < 1e-12);
        assert!((p3 - 0.105_360_160_423_250_65).abs() < 1e-10);
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(threshold_bounds(&q(10.0, 1, 0.0)), (0.0, 0.0));
        let query = q(100.0, 2, 100f64.ln());
        let (lo, hi) = threshold_bounds(&query);
        assert!((hi - 4.60517).abs() < 1e-5);
        assert!((lo - 4.39309).abs() < 1e-5);
        let t = threshold(&query);
        assert!(lo <= t && t <= hi);

        let n: f64 = 1e4;
        let d_n = 2.0 * 1.5 * n.ln().ln();
        let (lo, _) = threshold_bounds(&q(n, 1, d_n));
        assert!(lo / n.ln().ln() > 1.0);
    }

    #[test]
    fn band_examples() {
        assert!((lil_band(E.powf(E), 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((lil_band(E.powf(E), 3).unwrap() - 3.0).abs() < 1e-12);
        assert!((lil_band(1e6_f64, 1).unwrap() - 2.625_791_914_476_133).abs() < 1e-12);
        assert!(lil_band(2.9_f64, 1).is_err());
    }

    #[test]
    fn query_validation() {
        assert!(OverestimationQuery::new(0.5, 1, 1.0).is_err());
        assert!(OverestimationQuery::new(10.0, 0, 1.0).is_err());
        assert!(OverestimationQuery::new(10.0, 1, -1.0).is_err());
        assert!(OverestimationQuery::new(10.0, 1, f64::NAN).is_err());
    }
}
