//! Seeded data generators.

use serde::{Deserialize, Serialize};

use crate::ar_select::{is_stationary, ArSeries};
use crate::error::{Error, Result};
use crate::lr_select::{RegressionDataset, Subset};
use crate::numkernel::Mat;
use crate::simlab::rng::CounterRng;

/// Noise law, always scaled to variance `σ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Gaussian,
    Uniform,
    Laplace,
    Rademacher,
}

impl NoiseKind {
    fn draw(self, rng: &mut CounterRng) -> f64 {
        match self {
            Self::Gaussian => rng.normal(),
            Self::Uniform => (2.0 * rng.uniform() - 1.0) * 3f64.sqrt(),
            Self::Laplace => {
                let u = rng.uniform_open() - 0.5;
                -u.signum() * (1.0 - 2.0 * u.abs()).ln() / std::f64::consts::SQRT_2
            }
            Self::Rademacher => rng.rademacher(),
        }
    }
}

/// Data-generating process. For the regression kinds `m = alpha.len()` and
/// the true subset is the set of nonzero entries of `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorKind {
    LrGaussian { alpha: Vec<f64>, sigma: f64 },
    LrNonGaussian { alpha: Vec<f64>, sigma: f64, noise: NoiseKind },
    ArPath { coeffs: Vec<f64>, sigma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    kind: GeneratorKind,
    seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, seed: u64) -> Result<Self> {
        let (params, sigma) = match &kind {
            GeneratorKind::LrGaussian { alpha, sigma } | GeneratorKind::LrNonGaussian { alpha, sigma, .. } => {
                (alpha, *sigma)
            }
            GeneratorKind::ArPath { coeffs, sigma } => (coeffs, *sigma),
        };
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::Config(format!("sigma must be positive, got {sigma}")));
        }
        if params.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("generator coefficients must be finite".into()));
        }
        if let GeneratorKind::ArPath { coeffs, .. } = &kind {
            if !is_stationary(coeffs) {
                return Err(Error::NonStationary);
            }
        }
        Ok(Self { kind, seed })
    }

    pub fn lr_gaussian(alpha: Vec<f64>, sigma: f64, seed: u64) -> Result<Self> {
        Self::new(GeneratorKind::LrGaussian { alpha, sigma }, seed)
    }

    pub fn ar_path(coeffs: Vec<f64>, sigma: f64, seed: u64) -> Result<Self> {
        Self::new(GeneratorKind::ArPath { coeffs, sigma }, seed)
    }

    pub fn kind(&self) -> &GeneratorKind {
        &self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            kind: self.kind.clone(),
            seed,
        }
    }

    pub fn is_regression(&self) -> bool {
        !matches!(self.kind, GeneratorKind::ArPath { .. })
    }

    /// Regressor count (zero for AR).
    pub fn m(&self) -> usize {
        match &self.kind {
            GeneratorKind::LrGaussian { alpha, .. } | GeneratorKind::LrNonGaussian { alpha, .. } => alpha.len(),
            GeneratorKind::ArPath { .. } => 0,
        }
    }

    /// Nonzero-coefficient indices (1-based) of a regression generator.
    pub fn true_subset(&self) -> Subset {
        match &self.kind {
            GeneratorKind::LrGaussian { alpha, .. } | GeneratorKind::LrNonGaussian { alpha, .. } => {
                let idx = alpha.iter().enumerate().filter(|(_, &a)| a != 0.0).map(|(j, _)| j + 1).collect();
                Subset::new(idx, alpha.len()).expect("indices within range")
            }
            GeneratorKind::ArPath { .. } => Subset::empty(),
        }
    }

    /// Position of the last nonzero AR coefficient.
    pub fn true_order(&self) -> usize {
        match &self.kind {
            GeneratorKind::ArPath { coeffs, .. } => coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |p| p + 1),
            _ => 0,
        }
    }

    pub fn burn_in(&self) -> usize {
        10 * self.true_order() + 1000
    }
}

/// `n` i.i.d. rows: standard normal regressors, `y = X·α + σ·ε`.
///
/// Rows are drawn sequentially from one stream, so the dataset for `n₁` is
/// a prefix of the dataset for any `n₂ > n₁`.
pub fn generate_lr(spec: &GeneratorSpec, n: usize) -> Result<RegressionDataset<f64>> {
    let (alpha, sigma, noise) = match spec.kind() {
        GeneratorKind::LrGaussian { alpha, sigma } => (alpha, *sigma, NoiseKind::Gaussian),
        GeneratorKind::LrNonGaussian { alpha, sigma, noise } => (alpha, *sigma, *noise),
        GeneratorKind::ArPath { .. } => return Err(Error::Config("generate_lr needs a regression generator".into())),
    };
    let m = alpha.len();
    let mut rng = CounterRng::from_seed(spec.seed());
    let mut data = Vec::with_capacity(n * m);
    let mut response = Vec::with_capacity(n);
    for _ in 0..n {
        let mut y = 0.0;
        for &a in alpha {
            let x = rng.normal();
            y += a * x;
            data.push(x);
        }
        response.push(y + sigma * noise.draw(&mut rng));
    }
    RegressionDataset::new(Mat::from_row_major(n, m, data)?, response)
}

/// AR path from a zero initial state; the first `10·k* + 1000` values are
/// discarded. Prefix-consistent in `n` like [`generate_lr`].
pub fn generate_ar(spec: &GeneratorSpec, n: usize) -> Result<ArSeries<f64>> {
    let GeneratorKind::ArPath { coeffs, sigma } = spec.kind() else {
        return Err(Error::Config("generate_ar needs an ar_path generator".into()));
    };
    let p = coeffs.len();
    let mut rng = CounterRng::from_seed(spec.seed());
    let burn = spec.burn_in();
    let mut history = vec![0.0; p];
    let mut out = Vec::with_capacity(n);
    for t in 0..burn + n {
        // history[0] is the most recent value
        let x = coeffs.iter().zip(&history).map(|(c, h)| c * h).sum::<f64>() + sigma * rng.normal();
        if p > 0 {
            history.rotate_right(1);
            history[0] = x;
        }
        if t >= burn {
            out.push(x);
        }
    }
    ArSeries::new(out)
}
