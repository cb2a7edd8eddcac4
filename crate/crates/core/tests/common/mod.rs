//! Test-only oracles, written independently of the library's solvers.
#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use hqlab::simlab::CounterRng;
use hqlab::Matrix;

/// Plain Gaussian elimination with partial pivoting on a dense copy.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Inverse via Gauss-Jordan.
pub fn invert(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
        cols.push(gauss_solve(a.to_vec(), e));
    }
    (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
}

pub fn gram(x: &Matrix) -> Vec<Vec<f64>> {
    let q = x.cols();
    (0..q)
        .map(|a| (0..q).map(|b| (0..x.rows()).map(|i| x.get(i, a) * x.get(i, b)).sum()).collect())
        .collect()
}

/// RSS from the normal equations `XᵀX β = Xᵀy`.
pub fn normal_equations_rss(x: &Matrix, y: &[f64]) -> (Vec<f64>, f64) {
    let q = x.cols();
    let xty: Vec<f64> = (0..q).map(|j| (0..x.rows()).map(|i| x.get(i, j) * y[i]).sum()).collect();
    let beta = gauss_solve(gram(x), xty);
    let rss = (0..x.rows())
        .map(|i| {
            let fit: f64 = (0..q).map(|j| x.get(i, j) * beta[j]).sum();
            (y[i] - fit).powi(2)
        })
        .sum();
    (beta, rss)
}

/// Explicit `P = X (XᵀX)⁻¹ Xᵀ`.
pub fn projection(x: &Matrix) -> Vec<Vec<f64>> {
    let n = x.rows();
    let q = x.cols();
    let inv = invert(&gram(x));
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in 0..n {
            let mut s = 0.0;
            for a in 0..q {
                for b in 0..q {
                    s += x.get(i, a) * inv[a][b] * x.get(k, b);
                }
            }
            p[i][k] = s;
        }
    }
    p
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn quad_form(p: &[Vec<f64>], y: &[f64]) -> f64 {
    (0..y.len()).map(|i| (0..y.len()).map(|k| y[i] * p[i][k] * y[k]).sum::<f64>()).sum()
}

pub fn random_matrix(rng: &mut CounterRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.normal())
}

pub fn random_vec(rng: &mut CounterRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.normal()).collect()
}

/// Composite Simpson rule with `intervals` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `P(χ²₁ ≥ t)` by quadrature: with `x = u²` the mass below `t` is
/// `∫₀^√t 2φ(u) du`, which has a smooth integrand.
pub fn chi2_1_survival_by_quadrature(t: f64) -> f64 {
    let phi2 = |u: f64| 2.0 * (-u * u / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    1.0 - simpson(phi2, 0.0, t.sqrt(), 20_000)
}
