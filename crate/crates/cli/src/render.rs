//! Output formatting for the selection and probability commands.

use std::io::Write;

use hqlab::{Error, OrderSelection, Selection};
use serde_json::json;

use crate::{CliError, Format};

pub struct OverestValues {
    pub n: u64,
    pub dk: usize,
    pub penalty: String,
    pub d_n: f64,
    pub threshold: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub probability: f64,
}

/// Formats `x` with `digits` significant digits, switching to scientific
/// notation for very small or very large magnitudes.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    if !(-4..10).contains(&magnitude) {
        return format!("{:.*e}", digits - 1, x);
    }
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn json_err(e: serde_json::Error) -> CliError {
    CliError::Lab(Error::Parse(e.to_string()))
}

fn csv_err(e: impl std::fmt::Display) -> CliError {
    CliError::Lab(Error::Parse(e.to_string()))
}

pub fn selection(result: &Selection, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    let ranked = result.ranked();
    match format {
        Format::Text => {
            writeln!(w, "chosen: {}", result.chosen)?;
            writeln!(w, "penalty: {}  d_n: {}  n: {}", result.penalty, result.d_n, result.n)?;
            writeln!(w, "{:>4}  {:<16} {:>3}  {:>24}  {:>24}", "rank", "subset", "k", "rss", "criterion")?;
            for (i, s) in ranked.iter().enumerate() {
                writeln!(
                    w,
                    "{:>4}  {:<16} {:>3}  {:>24}  {:>24}",
                    i + 1,
                    s.subset.to_string(),
                    s.k,
                    s.rss,
                    s.criterion
                )?;
            }
        }
        Format::Json => {
            let scores: Vec<_> = ranked
                .iter()
                .map(|s| json!({"subset": s.subset, "k": s.k, "rss": s.rss, "criterion": s.criterion}))
                .collect();
            let doc = json!({
                "chosen": result.chosen,
                "penalty": result.penalty,
                "d_n": result.d_n,
                "n": result.n,
                "scores": scores,
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&doc).map_err(json_err)?)?;
        }
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["rank", "subset", "k", "rss", "criterion", "chosen"]).map_err(csv_err)?;
            for (i, s) in ranked.iter().enumerate() {
                out.write_record([
                    (i + 1).to_string(),
                    s.subset.to_string(),
                    s.k.to_string(),
                    s.rss.to_string(),
                    s.criterion.to_string(),
                    (s.subset == result.chosen).to_string(),
                ])
                .map_err(csv_err)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn order_selection(result: &OrderSelection, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    let mut ranked: Vec<_> = result.scores.iter().collect();
    ranked.sort_by(|a, b| a.criterion.total_cmp(&b.criterion).then(a.order.cmp(&b.order)));
    match format {
        Format::Text => {
            writeln!(w, "chosen order: {}", result.chosen)?;
            let coeffs: Vec<String> = result.coeffs.iter().map(f64::to_string).collect();
            writeln!(w, "coefficients: [{}]", coeffs.join(", "))?;
            writeln!(w, "penalty: {}  d_n: {}  n: {}", result.penalty, result.d_n, result.n)?;
            if let Some(k) = result.pruned_from {
                writeln!(w, "orders >= {k} pruned: innovation variance not positive")?;
            }
            writeln!(w, "{:>4}  {:>5}  {:>24}  {:>24}  {:>24}", "rank", "order", "sigma2", "reflection", "criterion")?;
            for (i, s) in ranked.iter().enumerate() {
                writeln!(
                    w,
                    "{:>4}  {:>5}  {:>24}  {:>24}  {:>24}",
                    i + 1,
                    s.order,
                    s.sigma2,
                    s.reflection,
                    s.criterion
                )?;
            }
        }
        Format::Json => {
            writeln!(w, "{}", serde_json::to_string_pretty(result).map_err(json_err)?)?;
        }
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["rank", "order", "sigma2", "reflection", "criterion", "chosen"])
                .map_err(csv_err)?;
            for (i, s) in ranked.iter().enumerate() {
                out.write_record([
                    (i + 1).to_string(),
                    s.order.to_string(),
                    s.sigma2.to_string(),
                    s.reflection.to_string(),
                    s.criterion.to_string(),
                    (s.order == result.chosen).to_string(),
                ])
                .map_err(csv_err)?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

pub fn overest(v: &OverestValues, format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    let rows = [
        ("d_n", v.d_n),
        ("threshold", v.threshold),
        ("lower_bound", v.lower_bound),
        ("upper_bound", v.upper_bound),
        ("probability", v.probability),
    ];
    match format {
        Format::Text => {
            writeln!(w, "n: {}", v.n)?;
            writeln!(w, "dk: {}", v.dk)?;
            writeln!(w, "penalty: {}", v.penalty)?;
            for (name, x) in rows {
                writeln!(w, "{name}: {}", significant(x, 10))?;
            }
        }
        Format::Json => {
            let doc = json!({
                "n": v.n,
                "dk": v.dk,
                "penalty": v.penalty,
                "d_n": v.d_n,
                "threshold": v.threshold,
                "lower_bound": v.lower_bound,
                "upper_bound": v.upper_bound,
                "probability": v.probability,
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&doc).map_err(json_err)?)?;
        }
        Format::Csv => {
            let mut out = csv::Writer::from_writer(w);
            out.write_record(["n", "dk", "penalty", "d_n", "threshold", "lower_bound", "upper_bound", "probability"])
                .map_err(csv_err)?;
            let mut rec = vec![v.n.to_string(), v.dk.to_string(), v.penalty.clone()];
            rec.extend(rows.iter().map(|(_, x)| significant(*x, 10)));
            out.write_record(&rec).map_err(csv_err)?;
            out.flush()?;
        }
    }
    Ok(())
}
