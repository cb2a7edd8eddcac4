use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::Result;

pub const REPORT_SCHEMA: &str = "hqlab-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Fresh independent datasets at every sample size.
    ErrorRate,
    /// One growing sample per path, inspected at each checkpoint.
    ConsistencyPath,
    /// Growing paths compared against the iterated-logarithm band.
    Lil,
}

/// Selection outcome tallies for one (criterion, n) cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellRecord {
    pub criterion: String,
    pub n: usize,
    pub trials: usize,
    pub correct: usize,
    pub overestimate: usize,
    pub underestimate: usize,
}

impl CellRecord {
    pub fn overestimate_rate(&self) -> f64 {
        self.overestimate as f64 / self.trials as f64
    }

    pub fn underestimate_rate(&self) -> f64 {
        self.underestimate as f64 / self.trials as f64
    }

    pub fn error_rate(&self) -> f64 {
        (self.overestimate + self.underestimate) as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Correct,
    Over,
    Under,
}

/// One growing path under one criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathRecord {
    pub path: usize,
    pub criterion: String,
    /// Outcome at each checkpoint, in grid order.
    pub outcomes: Vec<Outcome>,
    /// Largest checkpoint with a wrong selection.
    pub last_error_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LastErrorBin {
    pub criterion: String,
    /// `None` counts paths that never erred.
    pub last_error_n: Option<usize>,
    pub paths: usize,
}

/// Band exceedance tally at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LilRecord {
    pub n: usize,
    pub dk: usize,
    pub band: f64,
    pub paths: usize,
    pub exceedances: usize,
}

impl LilRecord {
    pub fn frequency(&self) -> f64 {
        self.exceedances as f64 / self.paths as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LilEvent {
    pub path: usize,
    pub n: usize,
    pub statistic: f64,
    pub exceeded: bool,
}

/// Machine-readable experiment output, schema `hqlab-report/1`.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub schema: &'static str,
    pub experiment: ExperimentKind,
    pub seed: u64,
    /// Configuration text, embedded as given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<Box<RawValue>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<CellRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<PathRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub last_error_histogram: Vec<LastErrorBin>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lil: Vec<LilRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lil_events: Vec<LilEvent>,
}

impl ExperimentReport {
    pub(crate) fn new(experiment: ExperimentKind, seed: u64) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            experiment,
            seed,
            config: None,
            cells: Vec::new(),
            paths: Vec::new(),
            last_error_histogram: Vec::new(),
            lil: Vec::new(),
            lil_events: Vec::new(),
        }
    }

    pub fn cell(&self, criterion: &str, n: usize) -> Option<&CellRecord> {
        self.cells.iter().find(|c| c.criterion == criterion && c.n == n)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| crate::Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// One row per (criterion, n) cell, or per checkpoint for band runs.
    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| crate::Error::Parse(e.to_string());
        if self.experiment == ExperimentKind::Lil {
            w.write_record(["dk", "n", "band", "paths", "exceedances", "frequency"]).map_err(io)?;
            for r in &self.lil {
                w.write_record([
                    r.dk.to_string(),
                    r.n.to_string(),
                    r.band.to_string(),
                    r.paths.to_string(),
                    r.exceedances.to_string(),
                    r.frequency().to_string(),
                ])
                .map_err(io)?;
            }
        } else {
            w.write_record([
                "criterion",
                "n",
                "trials",
                "correct",
                "overestimate",
                "underestimate",
                "overestimate_rate",
                "underestimate_rate",
            ])
            .map_err(io)?;
            for c in &self.cells {
                w.write_record([
                    c.criterion.clone(),
                    c.n.to_string(),
                    c.trials.to_string(),
                    c.correct.to_string(),
                    c.overestimate.to_string(),
                    c.underestimate.to_string(),
                    c.overestimate_rate().to_string(),
                    c.underestimate_rate().to_string(),
                ])
                .map_err(io)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Human-readable one-liners, one per cell.
    pub fn summary_lines(&self) -> Vec<String> {
        if self.experiment == ExperimentKind::Lil {
            return self
                .lil
                .iter()
                .map(|r| {
                    format!(
                        "n={} dk={} band={:.6} exceed={}/{} ({:.4})",
                        r.n,
                        r.dk,
                        r.band,
                        r.exceedances,
                        r.paths,
                        r.frequency()
                    )
                })
                .collect();
        }
        self.cells
            .iter()
            .map(|c| {
                format!(
                    "criterion={} n={} trials={} correct={} over={} ({:.4}) under={} ({:.4})",
                    c.criterion,
                    c.n,
                    c.trials,
                    c.correct,
                    c.overestimate,
                    c.overestimate_rate(),
                    c.underestimate,
                    c.underestimate_rate()
                )
            })
            .collect()
    }
}
