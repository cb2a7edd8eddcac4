//! Seeded generators and Monte Carlo experiments.

pub mod config;
pub mod experiment;
pub mod generate;
pub mod report;
pub mod rng;

pub use config::{run_config_text, ExperimentConfig};
pub use experiment::{
    consistency_path_experiment, error_rate_experiment, lil_experiment, probe_subset, NamedPenalty,
    SelectionOptions,
};
pub use generate::{generate_ar, generate_lr, GeneratorKind, GeneratorSpec, NoiseKind};
pub use report::{
    CellRecord, ExperimentKind, ExperimentReport, LastErrorBin, LilEvent, LilRecord, Outcome, PathRecord,
    REPORT_SCHEMA,
};
pub use rng::{derive_seed, CounterRng};
