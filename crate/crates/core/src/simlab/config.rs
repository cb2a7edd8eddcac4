//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "experiment": "error_rate",
//!   "seed": 0,
//!   "generator": { "kind": "lr_gaussian", "alpha": [1.0, 0.0], "sigma": 1.0 },
//!   "penalties": ["aic", "bic", "hq:1.5"],
//!   "checkpoints": [2000],
//!   "trials": 10000
//! }
//! ```
//!
//! `consistency_path` and `lil` runs take `paths` instead of `trials`; `lil`
//! also takes `dk` and ignores penalties. Optional keys: `mode`
//! (`exhaustive` or `nested`) and `kmax` for AR generators.

use serde::Deserialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::lr_select::SelectionMode;
use crate::simlab::experiment::{
    consistency_path_experiment, error_rate_experiment, lil_experiment, NamedPenalty, SelectionOptions,
};
use crate::simlab::generate::{GeneratorKind, GeneratorSpec};
use crate::simlab::report::{ExperimentKind, ExperimentReport};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    pub generator: GeneratorKind,
    #[serde(default)]
    pub penalties: Vec<String>,
    pub checkpoints: Vec<usize>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub paths: Option<usize>,
    #[serde(default)]
    pub mode: Option<SelectionMode>,
    #[serde(default)]
    pub kmax: Option<usize>,
    #[serde(default)]
    pub dk: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn run(&self, seed: u64) -> Result<ExperimentReport> {
        let spec = GeneratorSpec::new(self.generator.clone(), seed)?;
        let penalties: Vec<NamedPenalty> = self
            .penalties
            .iter()
            .map(|p| NamedPenalty::parse(p))
            .collect::<Result<_>>()?;
        let defaults = SelectionOptions::default();
        let opts = SelectionOptions {
            mode: self.mode.unwrap_or(defaults.mode),
            kmax: self.kmax.unwrap_or(defaults.kmax),
        };
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| Error::Config(format!("missing `{key}`")));
        match self.experiment {
            ExperimentKind::ErrorRate => {
                error_rate_experiment(&spec, &penalties, &self.checkpoints, need(self.trials, "trials")?, &opts)
            }
            ExperimentKind::ConsistencyPath => {
                consistency_path_experiment(&spec, &penalties, &self.checkpoints, need(self.paths, "paths")?, &opts)
            }
            ExperimentKind::Lil => lil_experiment(
                &spec,
                self.dk.unwrap_or(1),
                &self.checkpoints,
                need(self.paths, "paths")?,
            ),
        }
    }
}

/// Parses, runs and embeds the configuration text into the report.
/// `seed_override` replaces the configured seed.
pub fn run_config_text(text: &str, seed_override: Option<u64>) -> Result<ExperimentReport> {
    let config = ExperimentConfig::from_json(text)?;
    let seed = seed_override.unwrap_or(config.seed);
    let mut report = config.run(seed)?;
    report.config = Some(RawValue::from_string(text.trim().to_string()).map_err(|e| Error::Config(e.to_string()))?);
    Ok(report)
}
