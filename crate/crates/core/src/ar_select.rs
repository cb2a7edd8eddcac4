//! Autoregressive order estimation.
//!
//! Sample autocovariances feed the Yule-Walker equations, which are solved
//! for every order `k ≤ k_max` by the Durbin-Levinson recursion. Order `k` is
//! scored by `L(k) = (n/2)·ln σ̂²_k + (k/2)·d_n`.
//!
//! Coefficients follow the model convention `x_i = Σ λ_j x_{i−j} + w_i`.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{solve_dense, Mat};
use crate::penalty::PenaltySequence;
use crate::scalar::Scalar;

const DEGENERATE_VARIANCE: f64 = 1e-300;
const AUTOCOVARIANCE_SLACK: f64 = 1e-9;

/// Observed series `x_1, …, x_n` with `n ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArSeries<T> {
    samples: Vec<T>,
}

impl<T: Scalar> ArSeries<T> {
    pub fn new(samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if samples.len() < 2 {
            return Err(Error::Domain("a series needs at least two samples".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("series"));
        }
        Ok(Self { samples })
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    /// One real per line; blank lines are ignored.
    pub fn read_text(reader: impl Read) -> Result<Self> {
        let mut samples = Vec::new();
        for (lineno, line) in BufReader::new(reader).lines().enumerate() {
            let line = line?;
            let field = line.trim();
            if field.is_empty() {
                continue;
            }
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: {field:?} is not a number", lineno + 1)))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("line {}: non-finite value {field:?}", lineno + 1)));
            }
            samples.push(T::lit(v));
        }
        Self::new(samples)
    }

    pub fn read_text_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_text(std::fs::File::open(path)?)
    }

    pub fn write_text(&self, mut writer: impl Write) -> Result<()> {
        for v in &self.samples {
            writeln!(writer, "{v}")?;
        }
        Ok(())
    }
}

/// Biased sample autocovariances `γ̂_0, …, γ̂_K` and the sample mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutocovarianceTable<T> {
    gammas: Vec<T>,
    mean: T,
    n: usize,
}

impl<T: Scalar> AutocovarianceTable<T> {
    /// Wraps precomputed autocovariances (for example exact model values).
    pub fn new(gammas: Vec<T>, mean: T, n: usize) -> Result<Self> {
        let Some(&g0) = gammas.first() else {
            return Err(Error::Domain("autocovariance table needs gamma_0".into()));
        };
        if gammas.iter().any(|g| !g.is_finite()) || !mean.is_finite() {
            return Err(Error::NonFinite("autocovariance table"));
        }
        if g0 < T::zero() {
            return Err(Error::Domain(format!("gamma_0 must be >= 0, got {g0}")));
        }
        let slack = T::lit(AUTOCOVARIANCE_SLACK);
        if let Some(m) = gammas.iter().position(|g| g.abs() > g0 + slack) {
            return Err(Error::Domain(format!("|gamma_{m}| exceeds gamma_0")));
        }
        Ok(Self { gammas, mean, n })
    }

    pub fn gammas(&self) -> &[T] {
        &self.gammas
    }

    /// `γ̂_m`, symmetric in the lag.
    pub fn gamma(&self, lag: isize) -> T {
        self.gammas[lag.unsigned_abs()]
    }

    pub fn mean(&self) -> T {
        self.mean
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_lag(&self) -> usize {
        self.gammas.len() - 1
    }
}

/// `γ̂_m = (1/n) Σ_{i=1}^{n−m} (x_i − x̄)(x_{i+m} − x̄)` for `m = 0..=max_lag`.
pub fn autocovariance<T: Scalar>(series: &ArSeries<T>, max_lag: usize) -> Result<AutocovarianceTable<T>> {
    let x = series.samples();
    let n = x.len();
    if max_lag >= n {
        return Err(Error::LagTooLarge { lag: max_lag, n });
    }
    let nf = T::count(n);
    let mean = x.iter().copied().sum::<T>() / nf;
    let centered: Vec<T> = x.iter().map(|&v| v - mean).collect();
    let gammas = (0..=max_lag)
        .map(|m| {
            centered[..n - m]
                .iter()
                .zip(&centered[m..])
                .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
                / nf
        })
        .collect();
    AutocovarianceTable::new(gammas, mean, n)
}

/// Solution of the order-`k` Yule-Walker equations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YuleWalkerSolution<T> {
    pub order: usize,
    /// `λ̂_{1,k}, …, λ̂_{k,k}`.
    pub coeffs: Vec<T>,
    /// Innovation variance `σ̂²_k`.
    pub sigma2: T,
}

impl<T: Scalar> YuleWalkerSolution<T> {
    /// Last coefficient `λ̂_{k,k}` (zero at order 0).
    pub fn reflection(&self) -> T {
        self.coeffs.last().copied().unwrap_or_else(T::zero)
    }
}

/// The augmented `(k+1)×(k+1)` Yule-Walker system.
///
/// Row 0 is `[−1, γ̂_1, …, γ̂_k]` with right-hand side `−γ̂_0`; row `i ≥ 1`
/// is `[0, γ̂_{i−1}, …, γ̂_{i−k}]` with right-hand side `−γ̂_i`. Its solution
/// is `[σ̂²_k, −λ̂_{1,k}, …, −λ̂_{k,k}]`: the unknowns are the prediction
/// error filter taps, which carry the opposite sign of the model
/// coefficients.
pub fn yule_walker_system<T: Scalar>(table: &AutocovarianceTable<T>, k: usize) -> Result<(Mat<T>, Vec<T>)> {
    if k > table.max_lag() {
        return Err(Error::OrderTooLarge {
            order: k,
            max: table.max_lag(),
        });
    }
    let a = Mat::from_fn(k + 1, k + 1, |i, j| match (i, j) {
        (0, 0) => -T::one(),
        (0, j) => table.gamma(j as isize),
        (_, 0) => T::zero(),
        (i, j) => table.gamma(i as isize - j as isize),
    });
    let rhs = (0..=k).map(|i| -table.gamma(i as isize)).collect();
    Ok((a, rhs))
}

/// Solves the augmented system directly by Gaussian elimination.
pub fn yule_walker_direct<T: Scalar>(table: &AutocovarianceTable<T>, k: usize) -> Result<YuleWalkerSolution<T>> {
    let (a, rhs) = yule_walker_system(table, k)?;
    let sol = solve_dense(&a, &rhs)?;
    Ok(YuleWalkerSolution {
        order: k,
        coeffs: sol[1..].iter().map(|&v| -v).collect(),
        sigma2: sol[0],
    })
}

/// Durbin-Levinson recursion for orders `0..=k_max`.
pub fn levinson<T: Scalar>(table: &AutocovarianceTable<T>, k_max: usize) -> Result<Vec<YuleWalkerSolution<T>>> {
    let (levels, failure) = levinson_partial(table, k_max)?;
    match failure {
        Some(order) => Err(Error::NonpositiveVariance { order }),
        None => Ok(levels),
    }
}

/// Runs the recursion as far as it stays positive definite. Returns the
/// completed levels and, if it stopped early, the order whose innovation
/// variance was not positive.
pub fn levinson_partial<T: Scalar>(
    table: &AutocovarianceTable<T>,
    k_max: usize,
) -> Result<(Vec<YuleWalkerSolution<T>>, Option<usize>)> {
    if k_max > table.max_lag() {
        return Err(Error::OrderTooLarge {
            order: k_max,
            max: table.max_lag(),
        });
    }
    let g0 = table.gamma(0);
    if !(g0 > T::zero()) {
        return Err(Error::DegenerateVariance);
    }
    let mut levels = Vec::with_capacity(k_max + 1);
    levels.push(YuleWalkerSolution {
        order: 0,
        coeffs: Vec::new(),
        sigma2: g0,
    });
    let mut phi: Vec<T> = Vec::with_capacity(k_max);
    let mut sigma2 = g0;
    for k in 1..=k_max {
        let mut num = table.gamma(k as isize);
        for (j, &p) in phi.iter().enumerate() {
            num = num - p * table.gamma((k - j - 1) as isize);
        }
        let kappa = num / sigma2;
        let next: Vec<T> = (0..k - 1)
            .map(|j| phi[j] - kappa * phi[k - 2 - j])
            .chain(std::iter::once(kappa))
            .collect();
        let next_sigma2 = sigma2 * (T::one() - kappa * kappa);
        if !(next_sigma2 > T::zero()) || !next_sigma2.is_finite() {
            return Ok((levels, Some(k)));
        }
        debug_assert!(
            (next_sigma2 / sigma2 - (T::one() - kappa * kappa)).abs() <= T::lit(1e-12).max(T::epsilon() * T::lit(8.0))
        );
        phi = next;
        sigma2 = next_sigma2;
        levels.push(YuleWalkerSolution {
            order: k,
            coeffs: phi.clone(),
            sigma2,
        });
    }
    Ok((levels, None))
}

/// `(n/2)·ln σ̂² + (k/2)·d_n`.
pub fn criterion_ar<T: Scalar>(n: usize, sigma2: T, k: usize, d_n: T) -> Result<T> {
    if !(sigma2 > T::lit(DEGENERATE_VARIANCE)) {
        return Err(Error::DegenerateVariance);
    }
    let two = T::lit(2.0);
    Ok(T::count(n) / two * sigma2.ln() + T::count(k) / two * d_n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderScore<T> {
    pub order: usize,
    pub sigma2: T,
    pub reflection: T,
    pub criterion: T,
}

/// Result of AR order selection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArSelection<T> {
    pub chosen: usize,
    pub scores: Vec<OrderScore<T>>,
    pub coeffs: Vec<T>,
    pub penalty: String,
    pub d_n: T,
    pub n: usize,
    /// First order dropped because the recursion lost positive definiteness.
    pub pruned_from: Option<usize>,
}

/// Picks the order in `0..=k_max` minimizing the AR criterion; ties go to
/// the smaller order. Requires `k_max < n/2`.
pub fn select_ar_order<T: Scalar>(
    series: &ArSeries<T>,
    pen: &PenaltySequence<T>,
    k_max: usize,
) -> Result<ArSelection<T>> {
    let n = series.n();
    if 2 * k_max >= n {
        return Err(Error::OrderTooLarge {
            order: k_max,
            max: (n - 1) / 2,
        });
    }
    let table = autocovariance(series, k_max)?;
    let (levels, pruned_from) = levinson_partial(&table, k_max)?;
    let d_n = pen.evaluate(n as u64)?;
    let mut scores = Vec::with_capacity(levels.len());
    for level in &levels {
        scores.push(OrderScore {
            order: level.order,
            sigma2: level.sigma2,
            reflection: level.reflection(),
            criterion: criterion_ar(n, level.sigma2, level.order, d_n)?,
        });
    }
    let best = scores
        .iter()
        .min_by(|a, b| {
            a.criterion
                .partial_cmp(&b.criterion)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.order.cmp(&b.order))
        })
        .map_or(0, |s| s.order);
    Ok(ArSelection {
        chosen: best,
        coeffs: levels[best].coeffs.clone(),
        scores,
        penalty: pen.to_string(),
        d_n,
        n,
        pruned_from,
    })
}

/// Whether `x_i = Σ λ_j x_{i−j} + w_i` is stationary, by stepping the
/// recursion down to reflection coefficients; all must lie in `(−1, 1)`.
pub fn is_stationary<T: Scalar>(coeffs: &[T]) -> bool {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return false;
    }
    let mut phi = coeffs.to_vec();
    while let Some(&kappa) = phi.last() {
        if kappa.abs() >= T::one() {
            return false;
        }
        let k = phi.len();
        let denom = T::one() - kappa * kappa;
        phi = (0..k - 1).map(|j| (phi[j] + kappa * phi[k - 2 - j]) / denom).collect();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ar1_table() -> AutocovarianceTable<f64> {
        AutocovarianceTable::new(vec![4.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0], 0.0, 1000).unwrap()
    }

    #[test]
    fn constant_series_has_zero_autocovariance() {
        let s = ArSeries::new(vec![5.0_f64; 7]).unwrap();
        let t = autocovariance(&s, 3).unwrap();
        assert!(t.gammas().iter().all(|&g| g == 0.0));
        assert_eq!(t.mean(), 5.0);
    }

    #[test]
    fn alternating_series() {
        let s = ArSeries::new(vec![1.0_f64, -1.0, 1.0, -1.0]).unwrap();
        let t = autocovariance(&s, 1).unwrap();
        assert_eq!(t.mean(), 0.0);
        assert_eq!(t.gamma(0), 1.0);
        assert_eq!(t.gamma(1), -0.75);
        assert_eq!(t.gamma(-1), -0.75);
    }

    #[test]
    fn lag_must_be_below_length() {
        let s = ArSeries::new(vec![1.0_f64, 2.0, 3.0]).unwrap();
        assert!(matches!(autocovariance(&s, 3), Err(Error::LagTooLarge { lag: 3, n: 3 })));
        assert!(ArSeries::new(vec![1.0_f64]).is_err());
        assert!(ArSeries::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn direct_solve_recovers_ar1() {
        let sol = yule_walker_direct(&ar1_table(), 1).unwrap();
        assert!((sol.coeffs[0] - 0.5).abs() < 1e-14);
        assert!((sol.sigma2 - 1.0).abs() < 1e-14);
        let zero = yule_walker_direct(&ar1_table(), 0).unwrap();
        assert!(zero.coeffs.is_empty());
        assert_eq!(zero.sigma2, 4.0 / 3.0);
    }

    #[test]
    fn levinson_ar1_partial_autocorrelation_vanishes() {
        let levels = levinson(&ar1_table(), 2).unwrap();
        assert_eq!(levels.len(), 3);
        assert!(levels[2].reflection().abs() < 1e-15);
        assert!((levels[2].sigma2 - 1.0).abs() < 1e-14);
        assert!((levels[1].sigma2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn levinson_white_noise_table() {
        let t = AutocovarianceTable::new(vec![2.0, 0.0, 0.0, 0.0], 0.0, 50).unwrap();
        for level in levinson(&t, 3).unwrap() {
            assert!(level.coeffs.iter().all(|&c| c == 0.0));
            assert_eq!(level.sigma2, 2.0);
        }
    }

    #[test]
    fn levinson_reports_loss_of_definiteness() {
        // a pure sinusoid at lag 1 makes σ̂²_1 = 0
        let t = AutocovarianceTable::new(vec![1.0, 1.0, 1.0], 0.0, 10).unwrap();
        assert!(matches!(levinson(&t, 2), Err(Error::NonpositiveVariance { order: 1 })));
        let (levels, failed) = levinson_partial(&t, 2).unwrap();
        assert_eq!(levels.len(), 1);
        assert_eq!(failed, Some(1));
        let zero = AutocovarianceTable::new(vec![0.0, 0.0], 0.0, 10).unwrap();
        assert!(matches!(levinson(&zero, 1), Err(Error::DegenerateVariance)));
    }

    #[test]
    fn table_validation() {
        assert!(AutocovarianceTable::new(vec![1.0, 1.5], 0.0, 10).is_err());
        assert!(AutocovarianceTable::new(vec![-1.0], 0.0, 10).is_err());
        assert!(AutocovarianceTable::<f64>::new(vec![], 0.0, 10).is_err());
    }

    #[test]
    fn criterion_examples() {
        assert_eq!(criterion_ar(100, 1.0, 0, 3.0).unwrap(), 0.0);
        let e = std::f64::consts::E;
        assert!((criterion_ar(100, e * e, 1, 2.0).unwrap() - 101.0).abs() < 1e-12);
        // n = 2e taken as a real: (n/2)·ln e + ln(2e)
        let n = 2.0 * e;
        let v = n / 2.0 * e.ln() + 2.0 / 2.0 * n.ln();
        assert!((v - 4.41143).abs() < 1e-5);
        assert!(matches!(criterion_ar(10, 0.0_f64, 0, 1.0), Err(Error::DegenerateVariance)));
    }

    #[test]
    fn select_with_zero_max_order() {
        let s = ArSeries::new(vec![0.3_f64, -1.0, 2.0, 0.1, 0.7]).unwrap();
        let r = select_ar_order(&s, &PenaltySequence::bic(), 0).unwrap();
        assert_eq!(r.chosen, 0);
        assert_eq!(r.scores.len(), 1);
        assert!(matches!(
            select_ar_order(&s, &PenaltySequence::bic(), 3),
            Err(Error::OrderTooLarge { .. })
        ));
    }

    #[test]
    fn constant_series_is_zero_variance() {
        let s = ArSeries::new(vec![2.0_f64; 20]).unwrap();
        assert!(matches!(
            select_ar_order(&s, &PenaltySequence::bic(), 3),
            Err(Error::DegenerateVariance)
        ));
    }

    #[test]
    fn stationarity() {
        assert!(is_stationary::<f64>(&[]));
        assert!(is_stationary(&[0.5_f64]));
        assert!(!is_stationary(&[1.0_f64]));
        assert!(is_stationary(&[0.5_f64, -0.3]));
        assert!(!is_stationary(&[0.5_f64, 0.6]));
        assert!(!is_stationary(&[0.0_f64, 1.0]));
    }

    #[test]
    fn text_roundtrip_and_parsing() {
        let s = ArSeries::new(vec![0.25_f64, -1.5, 3.0]).unwrap();
        let mut buf = Vec::new();
        s.write_text(&mut buf).unwrap();
        assert_eq!(ArSeries::read_text(buf.as_slice()).unwrap(), s);
        assert!(ArSeries::<f64>::read_text("1\nnan\n".as_bytes()).is_err());
        assert!(ArSeries::<f64>::read_text("1\nx\n".as_bytes()).is_err());
        assert!(matches!(ArSeries::<f64>::read_text("\n".as_bytes()), Err(Error::EmptyDataset)));
    }
}
