use crate::error::{Error, Result};
use crate::numkernel::Mat;
use crate::scalar::{rank_tolerance, Scalar};

/// Least-squares fit: coefficients and residual sum of squares.
#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares<T> {
    pub coeffs: Vec<T>,
    pub rss: T,
}

/// Minimizes `‖y − X·β‖²` by Householder QR.
///
/// The RSS is the squared norm of the trailing `n − q` entries of `Qᵀy`, so
/// it is nonnegative by construction. A pivot whose magnitude falls below
/// `1e-10` times the largest column norm is reported as [`Error::RankDeficient`].
pub fn least_squares<T: Scalar>(x: &Mat<T>, y: &[T]) -> Result<LeastSquares<T>> {
    let n = x.rows();
    let q = x.cols();
    if y.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "response has {} entries, design has {n} rows",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("response"));
    }
    let mut r = y.to_vec();
    if q == 0 {
        return Ok(LeastSquares {
            coeffs: Vec::new(),
            rss: sum_sq(&r),
        });
    }
    if n < q {
        return Err(Error::RankDeficient { column: n });
    }

    // column-major working copy
    let mut a: Vec<T> = (0..q).flat_map(|j| (0..n).map(move |i| (i, j))).map(|(i, j)| x.get(i, j)).collect();
    let largest = (0..q)
        .map(|j| sum_sq(&a[j * n..(j + 1) * n]).sqrt())
        .fold(T::zero(), T::max);
    if largest == T::zero() {
        return Err(Error::RankDeficient { column: 0 });
    }
    let tol = rank_tolerance::<T>() * largest;
    let mut diag = vec![T::zero(); q];
    let mut v = vec![T::zero(); n];

    for k in 0..q {
        let col = &a[k * n + k..(k + 1) * n];
        let norm = sum_sq(col).sqrt();
        if norm < tol {
            return Err(Error::RankDeficient { column: k });
        }
        let alpha = if col[0] > T::zero() { -norm } else { norm };
        let len = n - k;
        v[..len].copy_from_slice(col);
        v[0] = v[0] - alpha;
        let vnorm2 = sum_sq(&v[..len]);
        diag[k] = alpha;
        if vnorm2 == T::zero() {
            continue;
        }
        let scale = T::lit(2.0) / vnorm2;
        for j in k + 1..q {
            reflect(&v[..len], scale, &mut a[j * n + k..(j + 1) * n]);
        }
        reflect(&v[..len], scale, &mut r[k..]);
    }

    // back substitution on R (upper triangle of `a`, diagonal in `diag`)
    let mut coeffs = vec![T::zero(); q];
    for i in (0..q).rev() {
        let mut s = r[i];
        for j in i + 1..q {
            s = s - a[j * n + i] * coeffs[j];
        }
        coeffs[i] = s / diag[i];
    }
    Ok(LeastSquares {
        coeffs,
        rss: sum_sq(&r[q..]),
    })
}

/// `S_small − S_big` for nested designs, the RSS reduction gained by the
/// extra columns. Clamped at zero against rounding.
pub fn rss_difference<T: Scalar>(x_small: &Mat<T>, x_big: &Mat<T>, y: &[T]) -> Result<T> {
    if x_small.cols() > x_big.cols() {
        return Err(Error::DimensionMismatch(
            "small design has more columns than big design".into(),
        ));
    }
    let small = least_squares(x_small, y)?;
    let big = least_squares(x_big, y)?;
    Ok((small.rss - big.rss).max(T::zero()))
}

#[inline]
fn sum_sq<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, &x| acc + x * x)
}

#[inline]
fn reflect<T: Scalar>(v: &[T], scale: T, target: &mut [T]) {
    let dot = v.iter().zip(target.iter()).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
    let f = scale * dot;
    for (t, &vi) in target.iter_mut().zip(v) {
        *t = *t - f * vi;
    }
}
