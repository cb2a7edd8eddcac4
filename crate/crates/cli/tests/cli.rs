use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hqlab::ar_select::{autocovariance, yule_walker_direct};
use hqlab::{Dataset, Series};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn hqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hqlab")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn single_error_line(out: &Output, code: i32, needle: &str) {
    assert_eq!(out.status.code(), Some(code));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.contains(needle), "{err}");
    assert!(out.stdout.is_empty());
}

fn indices(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[allow(clippy::needless_range_loop)]
/// Exhaustive argmin computed from Gram-matrix normal equations.
fn oracle_choice(ds: &Dataset, d_n: f64) -> Vec<u64> {
    let n = ds.n();
    let m = ds.m();
    let col = |j: usize| ds.design().column(j);
    let y = ds.response();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(u, v)| u * v).sum::<f64>();
    let mut best: Option<(f64, Vec<u64>)> = None;
    for mask in 0..1usize << m {
        let cols: Vec<usize> = (0..m).filter(|j| mask & (1 << j) != 0).collect();
        let k = cols.len();
        let mut a: Vec<Vec<f64>> = cols.iter().map(|&i| cols.iter().map(|&j| dot(&col(i), &col(j))).collect()).collect();
        let mut b: Vec<f64> = cols.iter().map(|&i| dot(&col(i), y)).collect();
        for c in 0..k {
            for r in c + 1..k {
                let f = a[r][c] / a[c][c];
                for t in c..k {
                    a[r][t] -= f * a[c][t];
                }
                b[r] -= f * b[c];
            }
        }
        let mut beta = vec![0.0; k];
        for i in (0..k).rev() {
            beta[i] = (b[i] - (i + 1..k).map(|j| a[i][j] * beta[j]).sum::<f64>()) / a[i][i];
        }
        let rss: f64 = (0..n)
            .map(|r| {
                let fit: f64 = cols.iter().zip(&beta).map(|(&j, b)| ds.design().get(r, j) * b).sum();
                (y[r] - fit).powi(2)
            })
            .sum();
        let crit = n as f64 * rss.ln() + k as f64 / 2.0 * d_n;
        let subset: Vec<u64> = cols.iter().map(|&j| j as u64 + 1).collect();
        if best.as_ref().is_none_or(|(c, _)| crit < *c) {
            best = Some((crit, subset));
        }
    }
    best.unwrap().1
}

#[test]
fn demo_selection_matches_brute_force() {
    let path = fixture("demo_lr.csv");
    let ds = Dataset::read_csv_path(&path).unwrap();
    assert_eq!((ds.n(), ds.m()), (200, 3));
    let out = stdout_json(&hqlab(&["select-lr", path.to_str().unwrap(), "--penalty", "bic", "--format", "json"]));
    assert_eq!(indices(&out["chosen"]), oracle_choice(&ds, 200f64.ln()));
    assert_eq!(out["scores"].as_array().unwrap().len(), 8);
    let chosen = indices(&out["chosen"]);
    assert!(chosen.starts_with(&[1, 2]), "true regressors must be kept: {chosen:?}");

    let free = stdout_json(&hqlab(&["select-lr", path.to_str().unwrap(), "--penalty", "const:0", "--format", "json"]));
    assert_eq!(indices(&free["chosen"]), vec![1, 2, 3]);

    let nested = stdout_json(&hqlab(&[
        "select-lr",
        path.to_str().unwrap(),
        "--mode",
        "nested",
        "--format",
        "json",
    ]));
    assert_eq!(nested["scores"].as_array().unwrap().len(), 4);
}

#[test]
fn ar_fixtures() {
    let ar2 = fixture("ar2.txt");
    let out = stdout_json(&hqlab(&["select-ar", ar2.to_str().unwrap(), "--penalty", "bic", "--kmax", "6", "--format", "json"]));
    assert_eq!(out["chosen"], 2);
    let series = Series::read_text_path(&ar2).unwrap();
    let direct = yule_walker_direct(&autocovariance(&series, 6).unwrap(), 2).unwrap();
    for (got, want) in out["coeffs"].as_array().unwrap().iter().zip(&direct.coeffs) {
        assert!((got.as_f64().unwrap() - want).abs() < 1e-10);
    }

    let wn = fixture("white_noise.txt");
    let out = stdout_json(&hqlab(&["select-ar", wn.to_str().unwrap(), "--penalty", "bic", "--format", "json"]));
    assert_eq!(out["chosen"], 0);
}

#[test]
fn overest_prob_values() {
    let v = stdout_json(&hqlab(&["overest-prob", "--n", "1000000", "--dk", "1", "--penalty", "const:2", "--format", "json"]));
    assert!((v["probability"].as_f64().unwrap() - 0.3173105).abs() < 1e-4);

    let v = stdout_json(&hqlab(&["overest-prob", "--n", "50", "--dk", "3", "--penalty", "const:0", "--format", "json"]));
    assert_eq!(v["probability"].as_f64().unwrap(), 1.0);

    let v = stdout_json(&hqlab(&["overest-prob", "--n", "100", "--dk", "2", "--penalty", "bic", "--format", "json"]));
    let t = v["threshold"].as_f64().unwrap();
    assert!((t - 100.0 * -(-100f64.ln() / 100.0).exp_m1()).abs() < 1e-12);
    assert!((v["probability"].as_f64().unwrap() - (-t / 2.0).exp()).abs() < 1e-12);

    let text = hqlab(&["overest-prob", "--n", "100", "--dk", "2", "--penalty", "bic"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("threshold: 4.500741398"), "{text}");
    assert!(text.contains("probability: 0.1053601604"), "{text}");
}

#[test]
fn data_errors_exit_2_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "y,x1,x2\n").unwrap();
    single_error_line(&hqlab(&["select-lr", empty.to_str().unwrap()]), 2, "empty dataset");

    let flat = dir.path().join("flat.txt");
    std::fs::write(&flat, "3\n3\n3\n3\n3\n3\n3\n3\n").unwrap();
    single_error_line(&hqlab(&["select-ar", flat.to_str().unwrap(), "--kmax", "2"]), 2, "zero variance");

    let demo = fixture("demo_lr.csv");
    single_error_line(&hqlab(&["select-lr", demo.to_str().unwrap(), "--penalty", "hq:"]), 2, "penalty");
    single_error_line(&hqlab(&["overest-prob", "--n", "10", "--dk", "0", "--penalty", "aic"]), 2, "dk");

    let missing = dir.path().join("nope.csv");
    single_error_line(&hqlab(&["select-lr", missing.to_str().unwrap()]), 2, "error:");

    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"experiment":"error_rate","generator":{"kind":"lr_gaussian","alpha":[1.0],"sigma":1.0},"penalties":["hq:"],"checkpoints":[50],"trials":3}"#).unwrap();
    single_error_line(&hqlab(&["simulate", cfg.to_str().unwrap()]), 2, "penalty");

    let nan = dir.path().join("nan.csv");
    std::fs::write(&nan, "y,x1\n1,NaN\n").unwrap();
    single_error_line(&hqlab(&["select-lr", nan.to_str().unwrap()]), 2, "error:");
}

#[test]
fn collinear_design_is_a_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.csv");
    let mut text = String::from("y,x1,x2\n");
    for i in 0..10 {
        let x = i as f64 * 0.37 - 1.0;
        text.push_str(&format!("{},{x},{x}\n", 2.0 * x + (i % 3) as f64));
    }
    std::fs::write(&path, text).unwrap();
    let out = hqlab(&["select-lr", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim_end().lines().count(), 1);
}

#[test]
fn simulate_writes_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.json");
    std::fs::write(&cfg, r#"{"experiment":"error_rate","seed":0,"generator":{"kind":"lr_gaussian","alpha":[1.0,0.0],"sigma":1.0},"penalties":["aic"],"checkpoints":[100],"trials":1}"#).unwrap();
    let report = dir.path().join("out.json");
    let out = hqlab(&["simulate", cfg.to_str().unwrap(), "--output", report.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);
    let doc: Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(doc["schema"], "hqlab-report/1");
    assert_eq!(doc["cells"].as_array().unwrap().len(), 1);
    assert_eq!(doc["config"]["trials"], 1);

    let csv = hqlab(&["simulate", cfg.to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("criterion,n,trials,correct,overestimate,underestimate"));
}

#[test]
fn aic_error_rate_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("aic.json");
    std::fs::write(&cfg, r#"{"experiment":"error_rate","seed":0,"generator":{"kind":"lr_gaussian","alpha":[1.0,0.0],"sigma":1.0},"penalties":["aic"],"checkpoints":[2000],"trials":10000}"#).unwrap();
    let doc = stdout_json(&hqlab(&["simulate", cfg.to_str().unwrap()]));
    let cell = &doc["cells"][0];
    let rate = cell["overestimate"].as_f64().unwrap() / cell["trials"].as_f64().unwrap();
    assert!((rate - 0.317).abs() <= 0.02, "{rate}");
}

#[test]
fn lil_check_runs() {
    let out = stdout_json(&hqlab(&["lil-check", "--grid", "50,500", "--paths", "20"]));
    assert_eq!(out["experiment"], "lil");
    assert_eq!(out["lil"].as_array().unwrap().len(), 2);
    let out = hqlab(&["lil-check", "--grid", "500,50"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn thread_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("paths.json");
    std::fs::write(&cfg, r#"{"experiment":"consistency_path","seed":5,"generator":{"kind":"lr_gaussian","alpha":[1.0,0.0,0.0],"sigma":1.0},"penalties":["hq:1.5","bic"],"checkpoints":[100,1000],"paths":30}"#).unwrap();
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_hqlab"))
            .args(["simulate", cfg.to_str().unwrap()])
            .env("HQLAB_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
    let bad = Command::new(env!("CARGO_BIN_EXE_hqlab"))
        .args(["simulate", cfg.to_str().unwrap()])
        .env("HQLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
