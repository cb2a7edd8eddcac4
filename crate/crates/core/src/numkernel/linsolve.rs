use crate::error::{Error, Result};
use crate::numkernel::Mat;
use crate::scalar::Scalar;

/// Solves a square system `A x = b` by Gaussian elimination with partial
/// pivoting.
pub fn solve_dense<T: Scalar>(a: &Mat<T>, b: &[T]) -> Result<Vec<T>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "system is {}x{} with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let scale = a.max_abs();
    if n > 0 && scale == T::zero() {
        return Err(Error::SingularSystem);
    }
    let tiny = scale * T::epsilon() * T::count(n.max(1));
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                m.get(i, col)
                    .abs()
                    .partial_cmp(&m.get(j, col).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        if m.get(pivot, col).abs() <= tiny {
            return Err(Error::SingularSystem);
        }
        if pivot != col {
            for j in 0..n {
                let t = m.get(col, j);
                m.set(col, j, m.get(pivot, j));
                m.set(pivot, j, t);
            }
            rhs.swap(col, pivot);
        }
        let p = m.get(col, col);
        for i in col + 1..n {
            let f = m.get(i, col) / p;
            if f == T::zero() {
                continue;
            }
            for j in col..n {
                m.set(i, j, m.get(i, j) - f * m.get(col, j));
            }
            rhs[i] = rhs[i] - f * rhs[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for j in i + 1..n {
            s = s - m.get(i, j) * x[j];
        }
        x[i] = s / m.get(i, i);
    }
    Ok(x)
}
