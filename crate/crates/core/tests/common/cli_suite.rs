//! Golden-file and exit-code checks for the `riskgate` binary, shared by
//! the `cli` tests and the acceptance run.
//!
//! `RISKGATE_BLESS=1` rewrites the golden files instead of comparing.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Output;

use super::riskgate;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if std::env::var_os("RISKGATE_BLESS").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}; rerun with RISKGATE_BLESS=1", path.display()));
    assert_eq!(actual, expected, "output differs from {name}");
}

fn check_golden_file(name: &str, dir: &Path, file: &str) {
    check_golden(name, &fs::read_to_string(dir.join(file)).unwrap());
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = riskgate(dir, args);
    assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
    out
}

const SMALL: [&str; 10] = ["--securities", "4", "--factors", "2", "--paths", "2", "--steps", "2", "--seed", "7"];

pub fn gen_writes_model_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["gen"];
    args.extend(SMALL);
    args.extend(["-o", "m.json"]);
    let out = ok(dir.path(), &args);
    check_golden("gen.stdout", &stdout(&out));
    check_golden_file("gen.model.json", dir.path(), "m.json");
    check_golden_file("gen.cert.json", dir.path(), "m.cert.json");
}

pub fn analyze_clean_and_injected() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["gen"];
    args.extend(SMALL);
    args.extend(["-o", "m.json"]);
    ok(dir.path(), &args);
    ok(dir.path(), &["analyze", "m.json", "-o", "report.json"]);
    check_golden_file("analyze.clean.json", dir.path(), "report.json");
    ok(dir.path(), &["analyze", "m.json", "--format", "csv", "-o", "report.csv"]);
    check_golden_file("analyze.clean.csv", dir.path(), "report.csv");
    assert!(!dir.path().join("m.violations.json").exists());

    args.extend(["--inject", "1:2:0.5", "--inject", "0:0:1e-3"]);
    *args.iter_mut().rev().find(|a| **a == "m.json").unwrap() = "bad.json";
    ok(dir.path(), &args);
    let out = riskgate(dir.path(), &["analyze", "bad.json", "-o", "report.json"]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("arbitrage at path 0, t_index 0"), "{err}");
    assert!(err.contains("arbitrage at path 1, t_index 2"), "{err}");
    check_golden_file("analyze.injected.json", dir.path(), "report.json");
    check_golden_file("analyze.injected.violations.json", dir.path(), "bad.violations.json");
}

pub fn capm_clean_and_blocked() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["gen"];
    args.extend(SMALL);
    args.extend(["-o", "m.json"]);
    ok(dir.path(), &args);
    ok(dir.path(), &["capm", "m.json", "-o", "capm.json"]);
    check_golden_file("capm.json", dir.path(), "capm.json");

    args.extend(["--inject", "0:1:0.25"]);
    *args.iter_mut().rev().find(|a| **a == "m.json").unwrap() = "bad.json";
    ok(dir.path(), &args);
    let out = riskgate(dir.path(), &["capm", "bad.json", "-o", "capm.json"]);
    assert_eq!(code(&out), 2);
    check_golden_file("capm.violations.json", dir.path(), "bad.violations.json");
}

pub fn complete_reinvests_dividends() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["gen", "--securities", "3", "--factors", "2", "--paths", "1", "--steps", "4", "--seed", "3", "--simulate", "-o", "sim.json"]);
    let holdings: Vec<Vec<Vec<f64>>> = vec![(0..5).map(|k| vec![0.0, 1.0 + 0.25 * k as f64, -0.5 * k as f64]).collect()];
    fs::write(dir.path().join("delta.json"), serde_json::json!({ "holdings": holdings }).to_string()).unwrap();
    ok(dir.path(), &["complete", "sim.json", "delta.json", "-o", "theta.json"]);
    check_golden_file("complete.json", dir.path(), "theta.json");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("theta.json")).unwrap()).unwrap();
    assert!(v["max_abs_dividend"].as_f64().unwrap() <= 1e-12);
    assert!(v["max_adjustment"].as_f64().unwrap() > 0.0);
}

pub fn rates_consistent_and_inconsistent() {
    let dir = tempfile::tempdir().unwrap();
    // with zero dispersion every security is riskless and earns r
    let base = ["gen", "--securities", "3", "--factors", "1", "--paths", "1", "--steps", "3", "--rank", "zero", "--seed", "11"];
    let mut args = base.to_vec();
    args.extend(["-o", "flat.json"]);
    ok(dir.path(), &args);
    let out = ok(dir.path(), &["rates", "flat.json", "--account-b", "1", "-o", "rates.json"]);
    assert!(stdout(&out).starts_with("consistent"));
    check_golden_file("rates.consistent.json", dir.path(), "rates.json");

    let mut args = base.to_vec();
    args.extend(["--inject", "0:2:0.5", "-o", "tilted.json"]);
    ok(dir.path(), &args);
    let out = riskgate(dir.path(), &["rates", "tilted.json", "--account-b", "1", "-o", "rates.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rates differ at path 0, t_index 2"));
    check_golden_file("rates.inconsistent.json", dir.path(), "rates.json");
    assert_eq!(
        fs::read(dir.path().join("rates.json")).unwrap(),
        fs::read(dir.path().join("tilted.violations.json")).unwrap()
    );
}

pub fn input_and_usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("broken.json"), "{\"times\": [0.0,").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec!["analyze"],
        vec!["analyze", "missing.json"],
        vec!["analyze", "broken.json"],
        vec!["gen", "--securities", "0", "--factors", "1", "--paths", "1", "--steps", "1", "-o", "x.json"],
        vec!["gen", "--securities", "3", "--factors", "1", "--paths", "1", "--steps", "1"],
        vec!["gen", "--securities", "3", "--factors", "1", "--paths", "1", "--steps", "1", "--rank", "many", "-o", "x.json"],
        vec!["gen", "--securities", "3", "--factors", "1", "--paths", "1", "--steps", "1", "--inject", "5:0:1", "-o", "x.json"],
        vec!["analyze", "broken.json", "--threads", "0"],
        vec!["analyze", "broken.json", "--rank-tol", "-1"],
    ];
    for args in &cases {
        let out = riskgate(dir.path(), args);
        assert_eq!(code(&out), 1, "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty(), "{args:?} printed no diagnostic");
    }
    let out = riskgate(dir.path(), &["analyze", "broken.json"]);
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));

    // cross-sectional models have no realized paths to complete along
    ok(dir.path(), &["gen", "--securities", "3", "--factors", "1", "--paths", "1", "--steps", "2", "-o", "cs.json"]);
    fs::write(dir.path().join("d.json"), r#"{"holdings": [[[0,1,0],[0,1,0],[0,1,0]]]}"#).unwrap();
    assert_eq!(code(&riskgate(dir.path(), &["complete", "cs.json", "d.json"])), 1);
    assert_eq!(code(&riskgate(dir.path(), &["--help"])), 0);
}

/// gen → analyze → capm, returning every file the pipeline wrote.
pub fn pipeline(dir: &Path, threads: &str) -> Vec<(String, Vec<u8>)> {
    let t = ["--threads", threads];
    let mut gen = vec!["gen", "--securities", "7", "--factors", "4", "--paths", "8", "--steps", "50", "--seed", "2024", "-o", "m.json"];
    gen.extend(t);
    ok(dir, &gen);
    let mut an = vec!["analyze", "m.json", "-o", "report.json"];
    an.extend(t);
    ok(dir, &an);
    let mut capm = vec!["capm", "m.json", "-o", "capm.json"];
    capm.extend(t);
    ok(dir, &capm);
    let mut bad = vec!["gen", "--securities", "7", "--factors", "4", "--paths", "8", "--steps", "50", "--seed", "2024", "--inject", "3:17:0.01", "--inject", "7:50:2", "-o", "bad.json"];
    bad.extend(t);
    ok(dir, &bad);
    let mut an = vec!["analyze", "bad.json", "--format", "csv", "-o", "bad.csv"];
    an.extend(t);
    assert_eq!(code(&riskgate(dir, &an)), 2);
    let mut names: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    names.into_iter().map(|n| {
        let bytes = fs::read(dir.join(&n)).unwrap();
        (n, bytes)
    }).collect()
}

pub fn pipeline_is_byte_identical_across_runs_and_threads() {
    let runs: Vec<_> = ["1", "1", "4", "8"]
        .iter()
        .map(|t| {
            let dir = tempfile::tempdir().unwrap();
            pipeline(dir.path(), t)
        })
        .collect();
    assert_eq!(runs[0].len(), 8, "{:?}", runs[0].iter().map(|(n, _)| n).collect::<Vec<_>>());
    for other in &runs[1..] {
        assert_eq!(&runs[0], other);
    }
}
