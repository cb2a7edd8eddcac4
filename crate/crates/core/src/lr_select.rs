//! Variable selection in linear regression without intercept.
//!
//! Each candidate subset `π` of regressors is scored by
//! `L(π) = n·ln S(π) + (|π|/2)·d_n`, where `S(π)` is the residual sum of
//! squares after regressing the response on the columns in `π`.

use std::cmp::Ordering;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{least_squares, Mat};
use crate::penalty::PenaltySequence;
use crate::scalar::Scalar;

/// Largest regressor count accepted by [`SelectionMode::Exhaustive`].
pub const MAX_EXHAUSTIVE_REGRESSORS: usize = 20;

/// RSS values at or below this are treated as an exact fit.
const DEGENERATE_RSS: f64 = 1e-300;

/// Design matrix (n × m) and response vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionDataset<T> {
    design: Mat<T>,
    response: Vec<T>,
}

impl<T: Scalar> RegressionDataset<T> {
    pub fn new(design: Mat<T>, response: Vec<T>) -> Result<Self> {
        if response.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if design.rows() != response.len() {
            return Err(Error::DimensionMismatch(format!(
                "design has {} rows, response has {}",
                design.rows(),
                response.len()
            )));
        }
        if response.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("response"));
        }
        Ok(Self { design, response })
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn m(&self) -> usize {
        self.design.cols()
    }

    pub fn design(&self) -> &Mat<T> {
        &self.design
    }

    pub fn response(&self) -> &[T] {
        &self.response
    }

    /// First `n` samples.
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.n());
        Self {
            design: self.design.head_rows(n),
            response: self.response[..n].to_vec(),
        }
    }

    /// Reads the `y,x1,…,xm` CSV layout. The header must match exactly and
    /// every value must be a finite number.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr.headers().map_err(csv_err)?.clone();
        if headers.get(0) != Some("y") {
            return Err(Error::Parse("first column must be named \"y\"".into()));
        }
        for (j, h) in headers.iter().enumerate().skip(1) {
            if h != format!("x{j}") {
                return Err(Error::Parse(format!("column {} must be named \"x{j}\", found {h:?}", j + 1)));
            }
        }
        let m = headers.len() - 1;
        let mut response = Vec::new();
        let mut data = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(csv_err)?;
            if record.len() != m + 1 {
                return Err(Error::Parse(format!("row {} has {} fields, expected {}", row + 1, record.len(), m + 1)));
            }
            for (j, field) in record.iter().enumerate() {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}: {field:?} is not a number", row + 1)))?;
                if !v.is_finite() {
                    return Err(Error::Parse(format!("row {}: non-finite value {field:?}", row + 1)));
                }
                if j == 0 {
                    response.push(T::lit(v));
                } else {
                    data.push(T::lit(v));
                }
            }
        }
        if response.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let design = Mat::from_row_major(response.len(), m, data)?;
        Self::new(design, response)
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["y".to_string()];
        header.extend((1..=self.m()).map(|j| format!("x{j}")));
        w.write_record(&header).map_err(csv_err)?;
        for i in 0..self.n() {
            let mut rec = vec![self.response[i].to_string()];
            rec.extend(self.design.row(i).iter().map(T::to_string));
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Sorted set of 1-based regressor indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct Subset(Vec<usize>);

impl Subset {
    /// Validates indices against `1..=m`, then sorts and deduplicates.
    pub fn new(mut indices: Vec<usize>, m: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > m) {
            return Err(Error::InvalidSubset { index: bad, m });
        }
        indices.sort_unstable();
        indices.dedup();
        Ok(Self(indices))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// `{1, …, k}`.
    pub fn prefix(k: usize) -> Self {
        Self((1..=k).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn is_superset_of(&self, other: &Subset) -> bool {
        other.0.iter().all(|&i| self.contains(i))
    }

    fn zero_based(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i - 1).collect()
    }

    fn from_mask(mask: u32, m: usize) -> Self {
        Self((1..=m).filter(|&j| mask & (1 << (j - 1)) != 0).collect())
    }

    /// How this (selected) subset relates to the true one.
    pub fn classify(&self, truth: &Subset) -> Fit {
        if !self.is_superset_of(truth) {
            Fit::Under
        } else if self.len() > truth.len() {
            Fit::Over
        } else {
            Fit::Correct
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{j}")?;
        }
        write!(f, "}}")
    }
}

/// Outcome of a selection relative to the true model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fit {
    Correct,
    /// A strict superset of the truth.
    Over,
    /// Misses at least one true regressor.
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    /// Every subset of `{1..m}`; `m ≤ 20`.
    #[default]
    Exhaustive,
    /// `∅, {1}, {1,2}, …, {1..m}`.
    Nested,
}

impl std::str::FromStr for SelectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "nested" => Ok(Self::Nested),
            _ => Err(Error::Parse(format!("unknown selection mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetScore<T> {
    pub subset: Subset,
    pub k: usize,
    pub rss: T,
    /// `-inf` marks an exact fit (zero RSS).
    pub criterion: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionResult<T> {
    pub chosen: Subset,
    /// Scores in candidate order: by size, then lexicographically.
    pub scores: Vec<SubsetScore<T>>,
    pub penalty: String,
    pub d_n: T,
    pub n: usize,
}

impl<T: Scalar> SelectionResult<T> {
    /// Scores ordered from best to worst under the tie rule.
    pub fn ranked(&self) -> Vec<&SubsetScore<T>> {
        let mut v: Vec<_> = self.scores.iter().collect();
        v.sort_by(|a, b| rank_order(a, b));
        v
    }

    pub fn score_of(&self, subset: &Subset) -> Option<&SubsetScore<T>> {
        self.scores.iter().find(|s| &s.subset == subset)
    }
}

/// Criterion first, then smaller `k`, then lexicographic subset order.
fn rank_order<T: Scalar>(a: &SubsetScore<T>, b: &SubsetScore<T>) -> Ordering {
    a.criterion
        .partial_cmp(&b.criterion)
        .unwrap_or(Ordering::Equal)
        .then(a.k.cmp(&b.k))
        .then_with(|| a.subset.cmp(&b.subset))
}

/// `S(π)`: RSS of the response regressed on the columns in `subset`.
pub fn rss_subset<T: Scalar>(ds: &RegressionDataset<T>, subset: &Subset) -> Result<T> {
    if let Some(&bad) = subset.indices().iter().find(|&&i| i == 0 || i > ds.m()) {
        return Err(Error::InvalidSubset { index: bad, m: ds.m() });
    }
    let x = ds.design.select_columns(&subset.zero_based())?;
    Ok(least_squares(&x, &ds.response)?.rss)
}

/// `n·ln(rss) + (k/2)·d_n`; fails with [`Error::DegenerateFit`] when the RSS
/// is (numerically) zero.
pub fn criterion_lr<T: Scalar>(n: usize, rss: T, k: usize, d_n: T) -> Result<T> {
    if !(rss > T::lit(DEGENERATE_RSS)) {
        return Err(Error::DegenerateFit);
    }
    Ok(T::count(n) * rss.ln() + T::count(k) / T::lit(2.0) * d_n)
}

/// Scores the candidate set and returns the criterion argmin.
pub fn select_subset<T: Scalar>(
    ds: &RegressionDataset<T>,
    pen: &PenaltySequence<T>,
    mode: SelectionMode,
) -> Result<SelectionResult<T>> {
    let n = ds.n();
    let d_n = pen.evaluate(n as u64)?;
    let candidates = candidates(ds.m(), mode)?;
    let mut scores = Vec::with_capacity(candidates.len());
    for subset in candidates {
        let rss = rss_subset(ds, &subset)?;
        let k = subset.len();
        let criterion = match criterion_lr(n, rss, k, d_n) {
            Ok(c) => c,
            Err(Error::DegenerateFit) => T::neg_infinity(),
            Err(e) => return Err(e),
        };
        scores.push(SubsetScore { subset, k, rss, criterion });
    }
    let chosen = scores
        .iter()
        .min_by(|a, b| rank_order(a, b))
        .map(|s| s.subset.clone())
        .unwrap_or_default();
    Ok(SelectionResult {
        chosen,
        scores,
        penalty: pen.to_string(),
        d_n,
        n,
    })
}

/// Candidate subsets in size-then-lexicographic order.
pub fn candidates(m: usize, mode: SelectionMode) -> Result<Vec<Subset>> {
    match mode {
        SelectionMode::Nested => Ok((0..=m).map(Subset::prefix).collect()),
        SelectionMode::Exhaustive => {
            if m > MAX_EXHAUSTIVE_REGRESSORS {
                return Err(Error::TooManyRegressors {
                    got: m,
                    max: MAX_EXHAUSTIVE_REGRESSORS,
                });
            }
            let mut all: Vec<Subset> = (0..1u32 << m).map(|mask| Subset::from_mask(mask, m)).collect();
            all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            Ok(all)
        }
    }
}

/// `(S_small − S_big) / (S_small / n)` for `small ⊆ big`.
pub fn delta_rss_statistic<T: Scalar>(ds: &RegressionDataset<T>, small: &Subset, big: &Subset) -> Result<T> {
    if !big.is_superset_of(small) {
        return Err(Error::Domain(format!("{small} is not contained in {big}")));
    }
    let s_small = rss_subset(ds, small)?;
    if !(s_small > T::lit(DEGENERATE_RSS)) {
        return Err(Error::DegenerateFit);
    }
    if small == big {
        return Ok(T::zero());
    }
    let s_big = rss_subset(ds, big)?;
    Ok((s_small - s_big).max(T::zero()) * T::count(ds.n()) / s_small)
}
