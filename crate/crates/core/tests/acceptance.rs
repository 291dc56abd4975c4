//! Acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic;
use std::sync::Mutex;
use std::time::Instant;

use common::*;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use riskgate::engine::{
    classify_sample, minimality_gap, rate_consistency, MoneyMarketAccount, RateConsistency,
};
use riskgate::kernel::{
    dot, dual_certificate, norm, orthonormal_row_projector, row_span_membership,
    solve_column_system, solve_row_system, KernelError, RealMatrix, ToleranceConfig,
};
use riskgate::market::{
    money_market_path, self_financing_completion, strategy_ledger, MarketModel, MarketSample,
};
use riskgate::scenario::{generate, ingest, read_certificate, RankProfile, ScenarioSpec};
use riskgate::{Grid, SampleIndex};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn dims(g: &mut ChaCha8Rng) -> (usize, usize, usize) {
    let m = g.random_range(1..=8);
    let k = g.random_range(1..=8);
    let r = g.random_range(0..=m.min(k));
    (m, k, r)
}

/// Projector onto `{x : a·x = 0}` built from the eigendecomposition of `aᵀa`.
fn null_projector(a: &RealMatrix) -> DMatrix<f64> {
    let d = to_dmatrix(a);
    let eig = (d.transpose() * &d).symmetric_eigen();
    let top = eig.eigenvalues.amax();
    let n = a.n_cols();
    let mut p = DMatrix::identity(n, n);
    for (i, ev) in eig.eigenvalues.iter().enumerate() {
        if *ev > 1e-10 * top.max(1.0) {
            let v = eig.eigenvectors.column(i);
            p -= v * v.transpose();
        }
    }
    p
}

fn project(p: &DMatrix<f64>, w: &[f64]) -> Vec<f64> {
    (p * DVector::from_column_slice(w)).iter().copied().collect()
}

fn kernel_factorization() -> Outcome {
    let tol = tol();
    let (mut orth, mut res) = (0.0_f64, 0.0_f64);
    for i in 0..1000 {
        let mut g = rng(i);
        let (m, k, r) = dims(&mut g);
        let v = planted_rank(&mut g, m, k, r);
        let f = orthonormal_row_projector(&v, &tol);
        ensure!(f.rank() == r, "instance {i} ({m}x{k}): rank {} for planted {r}", f.rank());
        orth = orth.max(orthonormality_error(&f));
        for row in v.rows() {
            res = res.max(norm(&f.orthogonal_residual(row)));
        }
    }
    ensure!(orth <= 1e-9, "max |QQᵀ - I| {orth:e}");
    ensure!(res <= 1e-8, "max row residual {res:e}");
    Ok(format!("1000 matrices, max |QQᵀ - I| {orth:.1e}, max row residual {res:.1e}"))
}

fn selectors() -> Outcome {
    let tol = tol();
    let (mut worst, mut compared, mut filtered) = (0.0_f64, 0, 0);
    for i in 0..1000 {
        let mut g = rng(10_000 + i);
        let (m, k, r) = dims(&mut g);
        let v = planted_rank(&mut g, m, k, r);
        let y = v.row_mul(&uniform_vec(&mut g, m)).unwrap();
        let psi = solve_row_system(&y, &v, &tol).map_err(|e| format!("instance {i}: {e}"))?;
        let back = v.row_mul(&psi).unwrap();
        let rel = norm(&back.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<_>>()) / (1.0 + norm(&y));
        worst = worst.max(rel);
        ensure!(rel <= 1e-8, "instance {i}: residual {rel:e}");
        let f = orthonormal_row_projector(&v, &tol);
        for (j, p) in psi.iter().enumerate() {
            ensure!(f.pivot_rows().contains(&j) || *p == 0.0, "instance {i}: non-pivot entry {j} is {p}");
        }
        let outside = uniform_vec(&mut g, k);
        for cand in [&y, &outside] {
            let well_posed = min_nonzero_singular(&v) >= 100.0 * tol.rank_tol
                && min_nonzero_singular(&stack_row(&v, cand)) >= 100.0 * tol.rank_tol;
            if !well_posed {
                filtered += 1;
                continue;
            }
            compared += 1;
            let ours = row_span_membership(cand, &v, &tol).unwrap().member;
            ensure!(ours == gauss_member(&v, cand), "instance {i}: membership disagrees with elimination");
        }
    }
    Ok(format!(
        "1000 instances, max relative residual {worst:.1e}, {compared} membership verdicts agree ({filtered} ill-conditioned skipped)"
    ))
}

fn duality() -> Outcome {
    let tol = tol();
    let (mut solutions, mut certificates) = (0, 0);
    let (mut zy, mut zs) = (0.0_f64, 0.0_f64);
    for i in 0..1000 {
        let mut g = rng(20_000 + i);
        let (m, k, r) = dims(&mut g);
        let sigma = planted_rank(&mut g, m, k, r);
        let y = if i % 2 == 0 {
            sigma.mul_col(&uniform_vec(&mut g, k)).unwrap()
        } else {
            uniform_vec(&mut g, m)
        };
        let solution = solve_column_system(&y, &sigma, &tol);
        let certificate = dual_certificate(&y, &sigma, &tol);
        ensure!(solution.is_ok() != certificate.is_ok(), "instance {i}: {solution:?} / {certificate:?}");
        match (solution, certificate) {
            (Ok(_), _) => solutions += 1,
            (Err(KernelError::NotInSpan { .. }), Ok(z)) => {
                certificates += 1;
                let a = (dot(&z, &y) - 1.0).abs();
                let b = norm(&sigma.row_mul(&z).unwrap()) / (1.0 + sigma.frobenius_norm());
                ensure!(a <= 1e-9 && b <= 1e-9, "instance {i}: |ZY - 1| {a:e}, ‖ZΣ‖ {b:e}");
                zy = zy.max(a);
                zs = zs.max(b);
            }
            (s, c) => return Err(format!("instance {i}: {s:?} / {c:?}")),
        }
    }
    Ok(format!(
        "{solutions} solutions, {certificates} certificates, max |ZY - 1| {zy:.1e}, max ‖ZΣ‖/(1+‖Σ‖) {zs:.1e}"
    ))
}

/// Samples from generated arbitrage-free models of assorted shapes and ranks.
fn free_samples(count: usize, seed: u64) -> Result<Vec<MarketSample>, String> {
    let tol = tol();
    let mut out = Vec::with_capacity(count);
    let mut g = rng(seed);
    while out.len() < count {
        let n = g.random_range(2..=8);
        let k = g.random_range(1..=6);
        let rank = match g.random_range(0..3) {
            0 => RankProfile::Full,
            1 => RankProfile::Deficient((n - 1).min(k) / 2),
            _ => RankProfile::Zero,
        };
        let spec = ScenarioSpec::new(n, k, 2, 4, g.random()).with_rank(rank);
        let (model, _) = generate(&spec).map_err(|e| e.to_string())?;
        for (idx, s) in model.samples().iter() {
            ensure!(classify_sample(s, 0, &tol).is_free(), "generated sample {idx} is not free");
            out.push(s.clone());
        }
    }
    out.truncate(count);
    Ok(out)
}

fn minimality() -> Outcome {
    let tol = tol();
    let mut g = rng(40_000);
    let (mut low, mut drift) = (f64::INFINITY, 0.0_f64);
    for (i, s) in free_samples(500, 4)?.iter().enumerate() {
        let v = classify_sample(s, 0, &tol);
        let ls = v.lambda_star().unwrap().to_vec();
        let zero = minimality_gap(&ls, &v, s, &tol).map_err(|e| e.to_string())?;
        ensure!(zero == 0.0, "sample {i}: gap {zero:e} for a zero perturbation");
        let p = null_projector(&s.dispersion);
        for _ in 0..100 {
            let nu = project(&p, &uniform_vec(&mut g, s.n_factors()));
            let lambda: Vec<f64> = ls.iter().zip(&nu).map(|(a, b)| a + b).collect();
            let gap = minimality_gap(&lambda, &v, s, &tol).map_err(|e| format!("sample {i}: {e}"))?;
            ensure!(gap >= -1e-9, "sample {i}: gap {gap:e}");
            low = low.min(gap);
            drift = drift.max((gap - dot(&nu, &nu)).abs());
        }
    }
    Ok(format!("500 samples x 100 perturbations, min gap {low:.1e}, max |gap - ‖ν‖²| {drift:.1e}"))
}

struct Suite5 {
    violated: Vec<(MarketModel, serde_json::Value)>,
}

static SUITE5: Mutex<Option<Suite5>> = Mutex::new(None);

fn read_json(path: &std::path::Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn capm_round_trip() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (paths, steps) = (4, 9);
    let mut worst = 0.0_f64;
    let mut min_strength = f64::INFINITY;
    let mut violated = Vec::new();
    for i in 0..100u64 {
        let seed = (5_000 + i).to_string();
        let base = ["--securities", "7", "--factors", "4", "--paths", "4", "--steps", "9", "--seed", seed.as_str()];
        let model = format!("m{i}.json");
        let mut args = vec!["gen"];
        args.extend(base);
        args.extend(["-o", model.as_str()]);
        ensure!(riskgate(d, &args).status.success(), "model {i}: gen failed");
        let capm_out = format!("capm{i}.json");
        let out = riskgate(d, &["capm", &model, "-o", &capm_out]);
        ensure!(out.status.code() == Some(0), "model {i}: capm exited {:?}", out.status.code());
        let residual = read_json(&d.join(&capm_out))["max_capm_residual"].as_f64().unwrap();
        ensure!(residual <= 1e-8, "model {i}: max CAPM residual {residual:e}");
        worst = worst.max(residual);

        let mut g = rng(50_000 + i);
        let mut picks = BTreeSet::new();
        while picks.len() < 3 {
            picks.insert(SampleIndex::new(g.random_range(0..paths), g.random_range(0..=steps)));
        }
        let injections: Vec<String> = picks
            .iter()
            .map(|p| {
                let strength = 10f64.powf(g.random_range(-4.0..=0.0));
                min_strength = min_strength.min(strength);
                format!("{}:{}:{strength}", p.path, p.t_index)
            })
            .collect();
        let bad = format!("bad{i}.json");
        let mut args = vec!["gen"];
        args.extend(base);
        for inj in &injections {
            args.extend(["--inject", inj.as_str()]);
        }
        args.extend(["-o", bad.as_str()]);
        ensure!(riskgate(d, &args).status.success(), "model {i}: gen with injections failed");
        let report_path = format!("report{i}.json");
        let out = riskgate(d, &["analyze", &bad, "-o", &report_path]);
        ensure!(out.status.code() == Some(2), "model {i}: analyze exited {:?}", out.status.code());
        let report = read_json(&d.join(&report_path));
        let found: Vec<SampleIndex> =
            serde_json::from_value(report["summary"]["violated_indices"].clone()).unwrap();
        let mut injected = read_certificate(d.join(format!("bad{i}.cert.json"))).unwrap().injected;
        injected.sort();
        ensure!(injected == picks.iter().copied().collect::<Vec<_>>(), "model {i}: certificate lists {injected:?}");
        ensure!(found == injected, "model {i}: found {found:?}, injected {injected:?}");
        violated.push((ingest(d.join(&bad)).unwrap(), report));
    }
    *SUITE5.lock().unwrap() = Some(Suite5 { violated });
    Ok(format!(
        "100 models, max CAPM residual {worst:.1e}; 300 injections (strength >= {min_strength:.1e}) found exactly"
    ))
}

fn certificates() -> Outcome {
    let guard = SUITE5.lock().unwrap();
    let Some(suite) = guard.as_ref() else {
        return Err("the round-trip suite produced no verdicts".into());
    };
    let (mut count, mut value, mut risk, mut excess) = (0, 0.0_f64, 0.0_f64, 0.0_f64);
    for (model, report) in &suite.violated {
        for v in report["verdicts"].as_array().unwrap() {
            if v["status"] != "violated" {
                continue;
            }
            let idx = SampleIndex::new(v["path"].as_u64().unwrap() as usize, v["t_index"].as_u64().unwrap() as usize);
            let theta: Vec<f64> = serde_json::from_value(v["theta"].clone()).unwrap();
            let s = model.sample(idx);
            let a = dot(&theta, &s.prices).abs() / (1.0 + norm(&s.prices));
            let b = norm(&s.dispersion.row_mul(&theta).unwrap()) / (1.0 + s.dispersion.frobenius_norm());
            let c = (dot(&theta, &s.excess_drift()) - 1.0).abs();
            ensure!(a <= 1e-9 && b <= 1e-9 && c <= 1e-9, "{idx}: |ΘS| {a:e}, ‖Θσ‖ {b:e}, |Θe - 1| {c:e}");
            value = value.max(a);
            risk = risk.max(b);
            excess = excess.max(c);
            count += 1;
        }
    }
    ensure!(count == 300, "expected 300 violated verdicts, saw {count}");
    Ok(format!(
        "{count} certificates, max scaled |ΘS| {value:.1e}, ‖Θσ‖ {risk:.1e}, |Θ(μ - rS) - 1| {excess:.1e}"
    ))
}

fn riskless_excess() -> Outcome {
    let mut g = rng(70_000);
    let mut worst = 0.0_f64;
    for (i, s) in free_samples(500, 7)?.iter().enumerate() {
        let p = null_projector(&s.dispersion.transpose());
        let e = s.excess_drift();
        for _ in 0..200 {
            let delta = project(&p, &uniform_vec(&mut g, s.n_securities()));
            let rel = dot(&delta, &e).abs() / (1.0 + norm(&delta) * norm(&e));
            ensure!(rel <= 1e-8, "sample {i}: |Δ(μ - rS)| scaled {rel:e}");
            worst = worst.max(rel);
        }
    }
    Ok(format!("500 samples x 200 riskless directions, max scaled |Δ(μ - rS)| {worst:.1e}"))
}

fn ledger_completion() -> Outcome {
    let model = dividend_market(8, 50, 200);
    let mut g = rng(80_000);
    let (mut div, mut gap) = (0.0_f64, 0.0_f64);
    for j in 0..20 {
        let delta = random_strategy(&mut g, &model);
        let before = strategy_ledger(&delta, &model, true).map_err(|e| e.to_string())?;
        ensure!(before.max_abs_dividend() > 1e-3, "strategy {j} pays no dividends");
        let theta = self_financing_completion(&delta, &model).map_err(|e| e.to_string())?;
        let after = strategy_ledger(&theta, &model, true).map_err(|e| e.to_string())?;
        let scale = 1.0 + after.max_abs_value();
        let d = after.max_abs_dividend() / scale;
        let v = after
            .value
            .cells()
            .iter()
            .zip(before.gains.cells())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
            / scale;
        ensure!(d <= 1e-9 && v <= 1e-9, "strategy {j}: dividends {d:e}, value gap {v:e}");
        div = div.max(d);
        gap = gap.max(v);
        for (idx, s) in model.samples().iter() {
            let (t, h) = (theta.at(idx), delta.at(idx));
            ensure!(s.dispersion.row_mul(t).unwrap() == s.dispersion.row_mul(h).unwrap(), "strategy {j}: Θσ ≠ Δσ at {idx}");
            let e = s.excess_drift();
            ensure!(dot(t, &e) == dot(h, &e), "strategy {j}: Θ(μ - rS) ≠ Δ(μ - rS) at {idx}");
        }
    }
    Ok(format!(
        "50 paths x 200 steps, 20 strategies, max scaled dividends {div:.1e}, max scaled value gap {gap:.1e}"
    ))
}

/// Money market, a second riskless account with rate `r + tilt`, and two
/// risky securities priced by a random `λ`. `tilt` is nonzero where
/// `differ` is set.
fn two_account_model(g: &mut ChaCha8Rng, n_paths: usize, n_times: usize) -> (MarketModel, Grid<f64>) {
    let dt = 0.1;
    let mut cells = Vec::new();
    let mut tilts = Vec::new();
    for _ in 0..n_paths {
        let (mut m, mut v) = (1.0_f64, g.random_range(0.5..50.0));
        let mut prev: Option<(f64, f64)> = None;
        for _ in 0..n_times {
            if let Some((r, r2)) = prev {
                m *= (r * dt).exp();
                v *= (r2 * dt).exp();
            }
            let r: f64 = g.random_range(0.0..0.1);
            let tilt = if g.random_bool(0.3) {
                g.random_range(0.001..0.05) * if g.random_bool(0.5) { 1.0 } else { -1.0 }
            } else {
                0.0
            };
            let r2 = r + tilt;
            let sigma = RealMatrix::from_rows(&[
                vec![0.0, 0.0],
                vec![0.0, 0.0],
                uniform_vec(g, 2),
                uniform_vec(g, 2),
            ])
            .unwrap();
            let prices = vec![m, v, g.random_range(1.0..100.0), g.random_range(1.0..100.0)];
            let premia = sigma.mul_col(&uniform_vec(g, 2)).unwrap();
            let drifts = vec![r * m, r2 * v, r * prices[2] + premia[2], r * prices[3] + premia[3]];
            cells.push(MarketSample {
                prices,
                drifts,
                dispersion: sigma,
                short_rate: r,
                deflator: m,
                cum_dividends: vec![0.0; 4],
            });
            tilts.push(tilt);
            prev = Some((r, r2));
        }
    }
    let times = (0..n_times).map(|k| k as f64 * dt).collect();
    let samples = Grid::from_cells(n_paths, n_times, cells).unwrap();
    let model = MarketModel::new(times, samples, 0, None, None).unwrap();
    (model, Grid::from_cells(n_paths, n_times, tilts).unwrap())
}

fn rate_accounts() -> Outcome {
    let tol = tol();
    let mut g = rng(90_000);
    let mut proportional = 0.0_f64;
    for _ in 0..100 {
        let steps = 200;
        let horizon = g.random_range(0.5..10.0);
        let times: Vec<f64> = (0..=steps).map(|k| horizon * k as f64 / steps as f64).collect();
        let rates: Vec<f64> = (0..steps).map(|_| g.random_range(-0.02..0.15)).collect();
        let a = money_market_path(&rates, g.random_range(0.01..1000.0), &times).unwrap();
        let b = money_market_path(&rates, g.random_range(0.01..1000.0), &times).unwrap();
        for (x, y) in a.iter().zip(&b) {
            proportional = proportional.max((x / a[0] - y / b[0]).abs());
        }
    }
    ensure!(proportional <= 1e-12, "equal-rate accounts drift apart by {proportional:e}");

    let (mut inconsistent, mut differing_total, mut worst_value) = (0, 0, 0.0_f64);
    for i in 0..100 {
        let (model, tilts) = two_account_model(&mut g, 3, 8);
        let a = MoneyMarketAccount::designated(&model);
        let b = MoneyMarketAccount::from_security(&model, 1, &tol).map_err(|e| format!("model {i}: {e}"))?;
        let expected: Vec<SampleIndex> = tilts.iter().filter(|(_, t)| **t != 0.0).map(|(idx, _)| idx).collect();
        match rate_consistency(&a, &b, &model, &tol).map_err(|e| e.to_string())? {
            RateConsistency::Consistent { max_normalized_gap, .. } => {
                ensure!(expected.is_empty(), "model {i}: rates differ at {expected:?} but reported consistent");
                ensure!(max_normalized_gap <= 1e-12, "model {i}: normalized gap {max_normalized_gap:e}");
            }
            RateConsistency::Inconsistent { witness, excess, differing, .. } => {
                inconsistent += 1;
                ensure!(differing == expected, "model {i}: differing {differing:?}, expected {expected:?}");
                differing_total += differing.len();
                for (idx, h) in witness.holdings().iter() {
                    let s = model.sample(idx);
                    let value = dot(h, &s.prices).abs() / (1.0 + norm(h) * norm(&s.prices));
                    worst_value = worst_value.max(value);
                    ensure!(value <= 1e-12, "model {i} {idx}: b̄S = {value:e}");
                    ensure!(s.dispersion.row_mul(h).unwrap().iter().all(|x| *x == 0.0), "model {i} {idx}: b̄σ ≠ 0");
                    let x = *excess.get(idx);
                    let tilt = *tilts.get(idx);
                    ensure!(x >= 0.0, "model {i} {idx}: b̄μ = {x:e}");
                    ensure!((x > 0.0) == (tilt != 0.0), "model {i} {idx}: b̄μ = {x:e} with rate gap {tilt:e}");
                    ensure!((x - tilt.abs()).abs() <= 1e-12, "model {i} {idx}: b̄μ = {x:e}, rate gap {tilt:e}");
                }
            }
        }
    }
    Ok(format!(
        "equal rates: max normalized gap {proportional:.1e}; {inconsistent} inconsistent models, {differing_total} differing samples matched, max scaled |b̄S| {worst_value:.1e}"
    ))
}

fn cli_contract() -> Outcome {
    cli_suite::gen_writes_model_and_certificate();
    cli_suite::analyze_clean_and_injected();
    cli_suite::capm_clean_and_blocked();
    cli_suite::complete_reinvests_dividends();
    cli_suite::rates_consistent_and_inconsistent();
    cli_suite::input_and_usage_errors_exit_one();
    cli_suite::pipeline_is_byte_identical_across_runs_and_threads();
    Ok("golden files for gen, analyze, capm, complete and rates; exit codes 0/1/2; byte-identical reruns with 1, 4 and 8 threads".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("kernel factorization", kernel_factorization),
        ("solution selectors", selectors),
        ("solution/certificate duality", duality),
        ("minimal price of risk", minimality),
        ("CAPM round trip and injected arbitrage", capm_round_trip),
        ("certificate validity", certificates),
        ("riskless directions earn no excess", riskless_excess),
        ("self-financing completion", ledger_completion),
        ("rate consistency", rate_accounts),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(msg)
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
