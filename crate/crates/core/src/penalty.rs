//! Penalty sequences `d_n` and the generic criterion `H + (k/2)·d_n`.
//!
//! The CLI grammar is `aic`, `bic`, `hq:<c>`, `const:<a>` and
//! `custom:<path>`, where the custom file holds one `n,d_n` pair per line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A rule `n ↦ d_n`, the per-parameter cost at sample size `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum PenaltySequence<T> {
    /// `d_n = a`; AIC is `Constant(2)`.
    Constant(T),
    /// `d_n = ln n` (MDL/BIC).
    LogN,
    /// `d_n = 2c·ln ln n`, clamped to zero for `n < 3`.
    HannanQuinn(T),
    /// Explicit lookup table.
    Custom(CustomTable<T>),
}

/// Tabulated penalty values keyed by sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTable<T> {
    label: String,
    values: BTreeMap<u64, T>,
}

impl<T: Scalar> CustomTable<T> {
    /// Validates the table: `n ≥ 1`, `d_n ≥ 0` and finite, no duplicate `n`,
    /// and a tail that looks like `d_n/n → 0` (the ratio is nonincreasing
    /// over the last three entries and below one at the last entry).
    pub fn new(label: impl Into<String>, entries: impl IntoIterator<Item = (u64, T)>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, d) in entries {
            if n == 0 {
                return Err(Error::InvalidPenalty("custom table entry with n = 0".into()));
            }
            if !d.is_finite() || d < T::zero() {
                return Err(Error::InvalidPenalty(format!("custom d_n must be finite and >= 0 (n = {n})")));
            }
            if values.insert(n, d).is_some() {
                return Err(Error::InvalidPenalty(format!("duplicate custom entry for n = {n}")));
            }
        }
        if values.is_empty() {
            return Err(Error::InvalidPenalty("custom table is empty".into()));
        }
        let ratios: Vec<T> = values
            .iter()
            .rev()
            .take(3)
            .map(|(&n, &d)| d / T::lit(n as f64))
            .collect();
        // `ratios` runs from the largest n backwards
        if ratios[0] >= T::one() || ratios.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidPenalty(
                "custom table tail does not satisfy d_n/n -> 0".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            values,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn get(&self, n: u64) -> Option<T> {
        self.values.get(&n).copied()
    }
}

impl<T: Scalar> PenaltySequence<T> {
    pub fn aic() -> Self {
        Self::Constant(T::lit(2.0))
    }

    pub fn bic() -> Self {
        Self::LogN
    }

    pub fn constant(a: T) -> Result<Self> {
        if !a.is_finite() || a < T::zero() {
            return Err(Error::InvalidPenalty(format!("constant penalty must be >= 0, got {a}")));
        }
        Ok(Self::Constant(a))
    }

    /// `c ≤ 1` is accepted so that below-threshold rates can be simulated.
    pub fn hannan_quinn(c: T) -> Result<Self> {
        if !c.is_finite() || c <= T::zero() {
            return Err(Error::InvalidPenalty(format!("Hannan-Quinn constant must be > 0, got {c}")));
        }
        Ok(Self::HannanQuinn(c))
    }

    /// Parses the CLI penalty grammar. `custom:<path>` reads the table file.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("aic", None) => Ok(Self::aic()),
            ("bic", None) => Ok(Self::bic()),
            ("hq", Some(c)) => Self::hannan_quinn(parse_real(c)?),
            ("const", Some(a)) => Self::constant(parse_real(a)?),
            ("custom", Some(path)) if !path.is_empty() => Self::load_custom(path),
            _ => Err(Error::InvalidPenalty(format!("unrecognized penalty spec {spec:?}"))),
        }
    }

    /// Reads a custom table: one `n,d_n` (or whitespace separated) pair per
    /// line; blank lines and `#` comments are skipped.
    pub fn load_custom(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut entries = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|f| !f.is_empty())
                .collect();
            let [n, d] = fields[..] else {
                return Err(Error::Parse(format!("{}:{}: expected `n,d_n`", path.display(), lineno + 1)));
            };
            let n: u64 = n
                .parse()
                .map_err(|_| Error::Parse(format!("{}:{}: bad sample size {n:?}", path.display(), lineno + 1)))?;
            entries.push((n, parse_real(d)?));
        }
        Ok(Self::Custom(CustomTable::new(path.display().to_string(), entries)?))
    }

    /// `d_n` at an integral sample size.
    pub fn evaluate(&self, n: u64) -> Result<T> {
        if n == 0 {
            return Err(Error::Domain("penalty evaluated at n = 0".into()));
        }
        match self {
            Self::Custom(table) => table.get(n).ok_or(Error::CustomTableMiss(n)),
            _ => self.evaluate_at(T::lit(n as f64)),
        }
    }

    /// `d_n` at a real-valued sample size (`n ≥ 1`). Custom tables only
    /// answer at integral `n`.
    pub fn evaluate_at(&self, n: T) -> Result<T> {
        if !(n >= T::one()) || !n.is_finite() {
            return Err(Error::Domain(format!("penalty evaluated at n = {n}")));
        }
        Ok(match self {
            Self::Constant(a) => *a,
            Self::LogN => n.ln(),
            Self::HannanQuinn(c) => {
                if n < T::lit(3.0) {
                    T::zero()
                } else {
                    (T::lit(2.0) * *c * n.ln().ln()).max(T::zero())
                }
            }
            Self::Custom(table) => {
                let as_int = n.to_u64().filter(|&k| T::lit(k as f64) == n);
                let key = as_int.ok_or(Error::CustomTableMiss(n.to_u64().unwrap_or(0)))?;
                table.get(key).ok_or(Error::CustomTableMiss(key))?
            }
        })
    }
}

impl<T: Scalar> fmt::Display for PenaltySequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(a) if *a == T::lit(2.0) => write!(f, "aic"),
            Self::Constant(a) => write!(f, "const:{a}"),
            Self::LogN => write!(f, "bic"),
            Self::HannanQuinn(c) => write!(f, "hq:{c}"),
            Self::Custom(t) => write!(f, "custom:{}", t.label()),
        }
    }
}

fn parse_real<T: Scalar>(s: &str) -> Result<T> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidPenalty(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::InvalidPenalty(format!("not a finite number: {s:?}")));
    }
    Ok(T::lit(v))
}

/// `H + (k/2)·d_n`.
#[inline]
pub fn generic_criterion<T: Scalar>(h: T, k: usize, d_n: T) -> T {
    h + T::count(k) / T::lit(2.0) * d_n
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn evaluate_examples() {
        let aic = PenaltySequence::<f64>::aic();
        assert_eq!(aic.evaluate(1_000_000).unwrap(), 2.0);
        let bic = PenaltySequence::<f64>::bic();
        assert!((bic.evaluate_at(E.powi(3)).unwrap() - 3.0).abs() < 1e-12);
        let hq = PenaltySequence::hannan_quinn(1.5).unwrap();
        assert!((hq.evaluate_at(E.powf(E)).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hannan_quinn_clamps_small_n() {
        let hq = PenaltySequence::hannan_quinn(1.0_f64).unwrap();
        assert_eq!(hq.evaluate(1).unwrap(), 0.0);
        assert_eq!(hq.evaluate(2).unwrap(), 0.0);
        assert!(hq.evaluate(3).unwrap() > 0.0);
        assert!(PenaltySequence::<f64>::hannan_quinn(0.0).is_err());
        assert!(PenaltySequence::hannan_quinn(0.4_f64).is_ok());
    }

    #[test]
    fn monotone_in_n() {
        for pen in [PenaltySequence::<f64>::bic(), PenaltySequence::hannan_quinn(1.2).unwrap()] {
            let mut prev = pen.evaluate(3).unwrap();
            for n in 4..5000u64 {
                let d = pen.evaluate(n).unwrap();
                assert!(d >= prev, "{pen} decreased at n={n}");
                prev = d;
            }
        }
    }

    #[test]
    fn sublinear_growth() {
        for pen in [
            PenaltySequence::<f64>::aic(),
            PenaltySequence::bic(),
            PenaltySequence::hannan_quinn(1.5).unwrap(),
            PenaltySequence::hannan_quinn(10.0).unwrap(),
        ] {
            assert!(pen.evaluate(100_000_000).unwrap() / 1e8 < 1e-5, "{pen}");
        }
    }

    #[test]
    fn generic_criterion_examples() {
        assert_eq!(generic_criterion(0.0, 0, 7.0), 0.0);
        assert_eq!(generic_criterion(10.0, 2, 2.0), 12.0);
        let v = generic_criterion(5.0, 3, 100f64.ln());
        assert!((v - 11.907_755_278_982_137).abs() < 1e-12);
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(PenaltySequence::<f64>::parse("aic").unwrap(), PenaltySequence::Constant(2.0));
        assert_eq!(PenaltySequence::<f64>::parse("BIC").unwrap(), PenaltySequence::LogN);
        assert_eq!(PenaltySequence::<f64>::parse("hq:1.5").unwrap(), PenaltySequence::HannanQuinn(1.5));
        assert_eq!(PenaltySequence::<f64>::parse("const:0").unwrap(), PenaltySequence::Constant(0.0));
        for bad in ["hq:", "hq:abc", "hq:-1", "const:-2", "const:nan", "foo", "aic:2", "custom:", ""] {
            assert!(PenaltySequence::<f64>::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn display_roundtrips_through_parse() {
        for s in ["aic", "bic", "hq:1.5", "const:0.5"] {
            let p = PenaltySequence::<f64>::parse(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn custom_table_rules() {
        let ok = CustomTable::new("t", vec![(10u64, 1.0_f64), (100, 2.0), (1000, 3.0)]).unwrap();
        let pen = PenaltySequence::Custom(ok);
        assert_eq!(pen.evaluate(100).unwrap(), 2.0);
        assert!(matches!(pen.evaluate(50), Err(Error::CustomTableMiss(50))));
        assert!(matches!(pen.evaluate_at(10.5), Err(Error::CustomTableMiss(_))));
        assert_eq!(pen.evaluate_at(1000.0).unwrap(), 3.0);

        // linear growth in the tail
        assert!(CustomTable::new("t", vec![(10u64, 1.0_f64), (20, 4.0), (30, 9.0)]).is_err());
        assert!(CustomTable::new("t", vec![(10u64, 20.0_f64)]).is_err());
        assert!(CustomTable::new("t", vec![(10u64, -1.0_f64)]).is_err());
        assert!(CustomTable::new("t", vec![(10u64, 1.0_f64), (10, 1.0)]).is_err());
        assert!(CustomTable::<f64>::new("t", vec![]).is_err());
    }
}
