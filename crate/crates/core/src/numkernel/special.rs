//! Log-gamma, regularized incomplete gamma and the χ² density/tail.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const MAX_ITER: usize = 10_000;

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn log_gamma<T: Scalar>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked<T: Scalar>(x: T) -> T {
    let half = T::lit(0.5);
    if x < half {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = T::PI();
        return (pi / (pi * x).sin()).ln() - log_gamma_unchecked(T::one() - x);
    }
    let z = x - T::one();
    let mut sum = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum = sum + T::lit(c) / (z + T::count(i));
    }
    let t = z + T::lit(LANCZOS_G) + half;
    half * (T::lit(2.0) * T::PI()).ln() + (z + half) * t.ln() - t + sum.ln()
}

/// Regularized upper incomplete gamma `Q(a, x) = Γ(a, x) / Γ(a)`.
///
/// Series for `x < a + 1`, Lentz continued fraction otherwise.
pub fn regularized_gamma_q<T: Scalar>(a: T, x: T) -> Result<T> {
    if !(a > T::zero()) || !(x >= T::zero()) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete gamma requires a > 0 and x >= 0, got a={a}, x={x}"
        )));
    }
    if x == T::zero() {
        return Ok(T::one());
    }
    if x.is_infinite() {
        return Ok(T::zero());
    }
    let log_prefactor = -x + a * x.ln() - log_gamma_unchecked(a);
    let q = if x < a + T::one() {
        T::one() - lower_series(a, x) * log_prefactor.exp()
    } else {
        upper_continued_fraction(a, x) * log_prefactor.exp()
    };
    Ok(q.max(T::zero()).min(T::one()))
}

// Σ x^k / (a (a+1) … (a+k)); multiplied by the prefactor gives P(a, x).
fn lower_series<T: Scalar>(a: T, x: T) -> T {
    let eps = T::epsilon();
    let mut ap = a;
    let mut term = T::one() / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap = ap + T::one();
        term = term * x / ap;
        sum = sum + term;
        if term.abs() < sum.abs() * eps {
            break;
        }
    }
    sum
}

fn upper_continued_fraction<T: Scalar>(a: T, x: T) -> T {
    let eps = T::epsilon();
    let tiny = T::min_positive_value() / eps;
    let two = T::lit(2.0);
    let mut b = x + T::one() - a;
    let mut c = T::one() / tiny;
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::count(i);
        let an = -fi * (fi - a);
        b = b + two;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = T::one() / d;
        let delta = d * c;
        h = h * delta;
        if (delta - T::one()).abs() < eps {
            break;
        }
    }
    h
}

/// Density of the χ² distribution with `dof` degrees of freedom.
///
/// `dof = 1` at `x = 0` is unbounded and rejected.
pub fn chi2_pdf<T: Scalar>(dof: usize, x: T) -> Result<T> {
    if dof == 0 || !(x >= T::zero()) {
        return Err(Error::Domain(format!("chi2_pdf requires dof >= 1 and x >= 0, got dof={dof}, x={x}")));
    }
    let half_dof = T::count(dof) / T::lit(2.0);
    if x == T::zero() {
        return match dof {
            1 => Err(Error::Domain("chi2_pdf is unbounded at x = 0 for dof = 1".into())),
            2 => Ok(T::lit(0.5)),
            _ => Ok(T::zero()),
        };
    }
    let log_pdf = (half_dof - T::one()) * x.ln()
        - x / T::lit(2.0)
        - half_dof * T::LN_2()
        - log_gamma_unchecked(half_dof);
    Ok(log_pdf.exp())
}

/// Upper tail `P(χ²_dof ≥ t) = Q(dof/2, t/2)`.
pub fn chi2_survival<T: Scalar>(dof: usize, t: T) -> Result<T> {
    if dof == 0 || !(t >= T::zero()) {
        return Err(Error::Domain(format!(
            "chi2_survival requires dof >= 1 and t >= 0, got dof={dof}, t={t}"
        )));
    }
    let two = T::lit(2.0);
    regularized_gamma_q(T::count(dof) / two, t / two)
}
