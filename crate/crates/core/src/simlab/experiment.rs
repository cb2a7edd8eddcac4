//! Monte Carlo runners.
//!
//! Work units (trials or paths) are independent and run on the rayon pool.
//! Unit `u` at checkpoint index `c` always draws from the stream
//! `derive_seed(seed, u, c)`, and results are gathered in unit order, so a
//! report does not depend on the number of worker threads.

use rayon::prelude::*;

use crate::ar_select::{select_ar_order, ArSeries};
use crate::error::{Error, Result};
use crate::lr_select::{delta_rss_statistic, select_subset, Fit, RegressionDataset, SelectionMode, Subset};
use crate::overestimation::lil_band;
use crate::penalty::PenaltySequence;
use crate::simlab::generate::{generate_ar, generate_lr, GeneratorSpec};
use crate::simlab::report::{
    CellRecord, ExperimentKind, ExperimentReport, LastErrorBin, LilEvent, LilRecord, Outcome, PathRecord,
};
use crate::simlab::rng::derive_seed;

/// Penalty together with the label it is reported under.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedPenalty {
    pub label: String,
    pub penalty: PenaltySequence<f64>,
}

impl NamedPenalty {
    pub fn parse(spec: &str) -> Result<Self> {
        Ok(Self {
            label: spec.trim().to_string(),
            penalty: PenaltySequence::parse(spec)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectionOptions {
    /// Candidate set for regression generators.
    pub mode: SelectionMode,
    /// Largest AR order tried for AR generators.
    pub kmax: usize,
}

impl Default for SelectionOptions {
    fn default() -> Self {
        Self {
            mode: SelectionMode::Exhaustive,
            kmax: 6,
        }
    }
}

enum Sample {
    Lr(RegressionDataset<f64>),
    Ar(ArSeries<f64>),
}

impl Sample {
    fn draw(spec: &GeneratorSpec, n: usize) -> Result<Self> {
        if spec.is_regression() {
            generate_lr(spec, n).map(Sample::Lr)
        } else {
            generate_ar(spec, n).map(Sample::Ar)
        }
    }

    fn prefix(&self, n: usize) -> Result<Self> {
        Ok(match self {
            Sample::Lr(d) => Sample::Lr(d.prefix(n)),
            Sample::Ar(s) => Sample::Ar(ArSeries::new(s.samples()[..n.min(s.n())].to_vec())?),
        })
    }

    fn outcomes(&self, spec: &GeneratorSpec, penalties: &[NamedPenalty], opts: &SelectionOptions) -> Result<Vec<Outcome>> {
        penalties
            .iter()
            .map(|p| match self {
                Sample::Lr(d) => {
                    let chosen = select_subset(d, &p.penalty, opts.mode)?.chosen;
                    Ok(match chosen.classify(&spec.true_subset()) {
                        Fit::Correct => Outcome::Correct,
                        Fit::Over => Outcome::Over,
                        Fit::Under => Outcome::Under,
                    })
                }
                Sample::Ar(s) => {
                    let chosen = select_ar_order(s, &p.penalty, opts.kmax)?.chosen;
                    Ok(match chosen.cmp(&spec.true_order()) {
                        std::cmp::Ordering::Equal => Outcome::Correct,
                        std::cmp::Ordering::Greater => Outcome::Over,
                        std::cmp::Ordering::Less => Outcome::Under,
                    })
                }
            })
            .collect()
    }
}

fn tally(criterion: &str, n: usize, outcomes: impl Iterator<Item = Outcome>) -> CellRecord {
    let mut cell = CellRecord {
        criterion: criterion.to_string(),
        n,
        trials: 0,
        correct: 0,
        overestimate: 0,
        underestimate: 0,
    };
    for o in outcomes {
        cell.trials += 1;
        match o {
            Outcome::Correct => cell.correct += 1,
            Outcome::Over => cell.overestimate += 1,
            Outcome::Under => cell.underestimate += 1,
        }
    }
    cell
}

fn check_common(penalties: &[NamedPenalty], grid: &[usize], units: usize, what: &str) -> Result<()> {
    if units == 0 {
        return Err(Error::Config(format!("{what} must be >= 1")));
    }
    if grid.is_empty() {
        return Err(Error::Config("at least one checkpoint is required".into()));
    }
    if penalties.is_empty() {
        return Err(Error::Config("at least one penalty is required".into()));
    }
    Ok(())
}

fn check_increasing(grid: &[usize]) -> Result<()> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("checkpoints must be strictly increasing".into()));
    }
    Ok(())
}

/// Fresh-draw selection error rates: every (trial, checkpoint) pair gets
/// its own dataset, shared by all penalties.
pub fn error_rate_experiment(
    spec: &GeneratorSpec,
    penalties: &[NamedPenalty],
    checkpoints: &[usize],
    trials: usize,
    opts: &SelectionOptions,
) -> Result<ExperimentReport> {
    check_common(penalties, checkpoints, trials, "trials")?;
    let mut per_checkpoint = Vec::with_capacity(checkpoints.len());
    for (ci, &n) in checkpoints.iter().enumerate() {
        let rows: Vec<Vec<Outcome>> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let unit = spec.with_seed(derive_seed(spec.seed(), t as u64, ci as u64));
                Sample::draw(&unit, n)?.outcomes(spec, penalties, opts)
            })
            .collect::<Result<_>>()?;
        per_checkpoint.push(rows);
    }
    let mut report = ExperimentReport::new(ExperimentKind::ErrorRate, spec.seed());
    for (pi, pen) in penalties.iter().enumerate() {
        for (ci, &n) in checkpoints.iter().enumerate() {
            report.cells.push(tally(&pen.label, n, per_checkpoint[ci].iter().map(|r| r[pi])));
        }
    }
    Ok(report)
}

/// Strong-consistency runs: each path is one growing sample inspected at
/// every checkpoint of `n_grid`.
pub fn consistency_path_experiment(
    spec: &GeneratorSpec,
    penalties: &[NamedPenalty],
    n_grid: &[usize],
    paths: usize,
    opts: &SelectionOptions,
) -> Result<ExperimentReport> {
    check_common(penalties, n_grid, paths, "paths")?;
    check_increasing(n_grid)?;
    let n_max = *n_grid.last().expect("grid is nonempty");
    // [path][checkpoint][penalty]
    let runs: Vec<Vec<Vec<Outcome>>> = (0..paths)
        .into_par_iter()
        .map(|p| {
            let unit = spec.with_seed(derive_seed(spec.seed(), p as u64, 0));
            let full = Sample::draw(&unit, n_max)?;
            n_grid
                .iter()
                .map(|&n| full.prefix(n)?.outcomes(spec, penalties, opts))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new(ExperimentKind::ConsistencyPath, spec.seed());
    for (pi, pen) in penalties.iter().enumerate() {
        for (ci, &n) in n_grid.iter().enumerate() {
            report.cells.push(tally(&pen.label, n, runs.iter().map(|r| r[ci][pi])));
        }
        let mut last_errors = Vec::with_capacity(paths);
        for (p, run) in runs.iter().enumerate() {
            let outcomes: Vec<Outcome> = run.iter().map(|c| c[pi]).collect();
            let last_error_n = outcomes
                .iter()
                .rposition(|&o| o != Outcome::Correct)
                .map(|ci| n_grid[ci]);
            last_errors.push(last_error_n);
            report.paths.push(PathRecord {
                path: p,
                criterion: pen.label.clone(),
                outcomes,
                last_error_n,
            });
        }
        for bin in std::iter::once(None).chain(n_grid.iter().map(|&n| Some(n))) {
            report.last_error_histogram.push(LastErrorBin {
                criterion: pen.label.clone(),
                last_error_n: bin,
                paths: last_errors.iter().filter(|&&e| e == bin).count(),
            });
        }
    }
    Ok(report)
}

/// Tracks `(S(π_*) − S(π))/(S(π_*)/n)` along growing paths against the band
/// `dk·ln ln n`, where `π` adds the first `dk` regressors outside `π_*`.
pub fn lil_experiment(spec: &GeneratorSpec, dk: usize, n_grid: &[usize], paths: usize) -> Result<ExperimentReport> {
    if !spec.is_regression() {
        return Err(Error::Config("the band experiment needs a regression generator".into()));
    }
    if dk == 0 {
        return Err(Error::Config("dk must be >= 1".into()));
    }
    if paths == 0 || n_grid.is_empty() {
        return Err(Error::Config("paths and checkpoints must be nonempty".into()));
    }
    check_increasing(n_grid)?;
    let truth = spec.true_subset();
    let probe = probe_subset(&truth, spec.m(), dk)?;
    if n_grid[0] < 3 || n_grid[0] <= probe.len() {
        return Err(Error::Config(format!(
            "checkpoints must be >= 3 and exceed the probe size {}",
            probe.len()
        )));
    }
    let bands: Vec<f64> = n_grid.iter().map(|&n| lil_band(n as f64, dk)).collect::<Result<_>>()?;
    let n_max = *n_grid.last().expect("grid is nonempty");

    let stats: Vec<Vec<f64>> = (0..paths)
        .into_par_iter()
        .map(|p| {
            let unit = spec.with_seed(derive_seed(spec.seed(), p as u64, 0));
            let full = generate_lr(&unit, n_max)?;
            n_grid
                .iter()
                .map(|&n| delta_rss_statistic(&full.prefix(n), &truth, &probe))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new(ExperimentKind::Lil, spec.seed());
    for (ci, &n) in n_grid.iter().enumerate() {
        report.lil.push(LilRecord {
            n,
            dk,
            band: bands[ci],
            paths,
            exceedances: stats.iter().filter(|s| s[ci] > bands[ci]).count(),
        });
    }
    for (p, row) in stats.iter().enumerate() {
        for (ci, &statistic) in row.iter().enumerate() {
            report.lil_events.push(LilEvent {
                path: p,
                n: n_grid[ci],
                statistic,
                exceeded: statistic > bands[ci],
            });
        }
    }
    Ok(report)
}

/// `truth` plus the `dk` smallest indices outside it.
pub fn probe_subset(truth: &Subset, m: usize, dk: usize) -> Result<Subset> {
    let extra: Vec<usize> = (1..=m).filter(|&j| !truth.contains(j)).take(dk).collect();
    if extra.len() < dk {
        return Err(Error::Config(format!(
            "need {dk} regressors outside the true set, only {} available",
            extra.len()
        )));
    }
    Subset::new(truth.indices().iter().copied().chain(extra).collect(), m)
}
