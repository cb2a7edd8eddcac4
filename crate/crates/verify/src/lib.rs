//! Reference implementations used by the acceptance suite. They are kept
//! deliberately naive (normal equations, explicit projections, Simpson
//! quadrature) and touch library matrices only through element access.

#![allow(clippy::needless_range_loop)]

use hqlab::Matrix;

/// Composite Simpson rule; `intervals` must be even.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut s = f(a) + f(b);
    for i in 1..intervals {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// `P(χ²₁ ≥ t) = 1 − ∫₀^√t 2φ(u) du`.
pub fn chi2_1_tail_quadrature(t: f64) -> f64 {
    let two_phi = |u: f64| 2.0 * (-u * u / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    1.0 - simpson(two_phi, 0.0, t.sqrt(), 20_000)
}

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
        x[i] = (b[i] - (i + 1..n).map(|j| a[i][j] * x[j]).sum::<f64>()) / a[i][i];
    }
    x
}

pub fn gram(x: &Matrix) -> Vec<Vec<f64>> {
    let q = x.cols();
    (0..q)
        .map(|a| (0..q).map(|b| (0..x.rows()).map(|i| x.get(i, a) * x.get(i, b)).sum()).collect())
        .collect()
}

pub fn normal_equations_rss(x: &Matrix, y: &[f64]) -> f64 {
    let q = x.cols();
    let xty: Vec<f64> = (0..q).map(|j| (0..x.rows()).map(|i| x.get(i, j) * y[i]).sum()).collect();
    let beta = gauss_solve(gram(x), xty);
    (0..x.rows())
        .map(|i| (y[i] - (0..q).map(|j| x.get(i, j) * beta[j]).sum::<f64>()).powi(2))
        .sum()
}

pub fn projection(x: &Matrix) -> Vec<Vec<f64>> {
    let (n, q) = (x.rows(), x.cols());
    let g = gram(x);
    let inv: Vec<Vec<f64>> = {
        let cols: Vec<Vec<f64>> = (0..q)
            .map(|j| gauss_solve(g.clone(), (0..q).map(|i| f64::from(u8::from(i == j))).collect()))
            .collect();
        (0..q).map(|i| (0..q).map(|j| cols[j][i]).collect()).collect()
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    let mut s = 0.0;
                    for a in 0..q {
                        for b in 0..q {
                            s += x.get(i, a) * inv[a][b] * x.get(k, b);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a.len())
        .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter().flatten().zip(b.iter().flatten()).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn quad_form(p: &[Vec<f64>], y: &[f64]) -> f64 {
    (0..y.len()).map(|i| (0..y.len()).map(|k| y[i] * p[i][k] * y[k]).sum::<f64>()).sum()
}
