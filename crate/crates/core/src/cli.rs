//! The `riskgate` command line.
//!
//! Exit codes: 0 clean, 2 arbitrage found, 1 usage or input error. Whenever
//! the exit code is 2 the witnesses are also written next to the model file
//! as `<model>.violations.json`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::engine::{
    analyze, capm_strategy, rate_consistency, AnalysisReport, EngineError, MoneyMarketAccount,
    RateConsistency,
};
use crate::grid::{Grid, SampleIndex};
use crate::kernel::ToleranceConfig;
use crate::market::io::StrategyFile;
use crate::market::{self_financing_completion, strategy_ledger, MarketModel, TradingStrategy};
use crate::scenario::{
    generate, ingest, simulate_scenario, write_certificate, write_model, Injection, RankProfile,
    ScenarioSpec,
};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_ARBITRAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "riskgate", version, about = "Instantaneous arbitrage checks for discretized market models")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Pivot acceptance threshold for rank decisions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    rank_tol: f64,
    /// Threshold for span membership and certificate checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    residual_tol: f64,
    #[arg(long, global = true, env = "RISKGATE_SEED")]
    seed: Option<u64>,
    /// Output file; defaults to standard output where applicable.
    #[arg(short, long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for analysis (default: number of processors).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a model and its ground-truth certificate.
    Gen(GenArgs),
    /// Classify every sample; exit 2 if any admits arbitrage.
    Analyze { model: PathBuf },
    /// Build the strategy whose betas price every security.
    Capm { model: PathBuf },
    /// Reinvest a strategy's dividends in the money market.
    Complete { model: PathBuf, strategy: PathBuf },
    /// Compare the growth rates of two riskless securities.
    Rates {
        model: PathBuf,
        /// First account (default: the designated money market).
        #[arg(long)]
        account_a: Option<usize>,
        /// Second account, a security index.
        #[arg(long)]
        account_b: usize,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Scenario spec JSON; flags given alongside override its fields.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Number of securities including the money market.
    #[arg(long)]
    securities: Option<usize>,
    #[arg(long)]
    factors: Option<usize>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    dispersion_scale: Option<f64>,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    rate_range: Option<Vec<f64>>,
    /// `full`, `zero` or a rank.
    #[arg(long, value_parser = parse_rank)]
    rank: Option<RankProfile>,
    /// `path:t_index:strength`, repeatable.
    #[arg(long, value_parser = parse_injection)]
    inject: Vec<Injection>,
    /// Simulate realized paths instead of independent cross sections.
    #[arg(long)]
    simulate: bool,
}

fn parse_rank(s: &str) -> Result<RankProfile, String> {
    match s {
        "full" => Ok(RankProfile::Full),
        "zero" => Ok(RankProfile::Zero),
        _ => s
            .parse()
            .map(RankProfile::Deficient)
            .map_err(|_| format!("expected `full`, `zero` or a rank, got `{s}`")),
    }
}

fn parse_injection(s: &str) -> Result<Injection, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let err = || format!("expected `path:t_index:strength`, got `{s}`");
    let [p, t, x] = parts.as_slice() else {
        return Err(err());
    };
    Ok(Injection {
        path: p.parse().map_err(|_| err())?,
        t_index: t.parse().map_err(|_| err())?,
        strength: x.parse().map_err(|_| err())?,
    })
}

enum Status {
    Clean,
    Arbitrage,
}

type CliResult = Result<Status, String>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_CLEAN };
        }
    };
    let result = match cli.common.threads {
        None => dispatch(&cli),
        Some(0) => Err("--threads must be at least 1".into()),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(format!("cannot start thread pool: {e}")),
        },
    };
    match result {
        Ok(Status::Clean) => EXIT_CLEAN,
        Ok(Status::Arbitrage) => EXIT_ARBITRAGE,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult {
    let c = &cli.common;
    let tol = ToleranceConfig::new(c.rank_tol, c.residual_tol)
        .map_err(|e| format!("--rank-tol/--residual-tol: {e}"))?;
    match &cli.command {
        Command::Gen(args) => cmd_gen(args, c),
        Command::Analyze { model } => cmd_analyze(model, c, &tol),
        Command::Capm { model } => cmd_capm(model, c, &tol),
        Command::Complete { model, strategy } => cmd_complete(model, strategy, c),
        Command::Rates {
            model,
            account_a,
            account_b,
        } => cmd_rates(model, *account_a, *account_b, c, &tol),
    }
}

/// `dir/m.json` → `dir/m.<suffix>`
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn to_json_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| format!("stdout: {e}")),
    }
}

fn load_model(path: &Path) -> Result<MarketModel, String> {
    ingest(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_strategy(path: &Path) -> Result<TradingStrategy, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let file: StrategyFile =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    file.into_strategy().map_err(|e| format!("{}: {e}", path.display()))
}

fn gen_spec(args: &GenArgs, common: &CommonArgs) -> Result<ScenarioSpec, String> {
    for (flag, value) in [
        ("--securities", args.securities),
        ("--factors", args.factors),
        ("--paths", args.paths),
        ("--steps", args.steps),
    ] {
        if value == Some(0) {
            return Err(format!("{flag} must be at least 1"));
        }
    }
    let mut spec = match &args.spec {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => {
            let need = |flag: &str, v: Option<usize>| v.ok_or_else(|| format!("{flag} is required without --spec"));
            ScenarioSpec::new(
                need("--securities", args.securities)?,
                need("--factors", args.factors)?,
                need("--paths", args.paths)?,
                need("--steps", args.steps)?,
                0,
            )
        }
    };
    if let Some(v) = args.securities {
        spec.n_securities = v;
    }
    if let Some(v) = args.factors {
        spec.n_factors = v;
    }
    if let Some(v) = args.paths {
        spec.n_paths = v;
    }
    if let Some(v) = args.steps {
        spec.n_steps = v;
    }
    if let Some(v) = args.horizon {
        spec.horizon = v;
    }
    if let Some(v) = args.dispersion_scale {
        spec.dispersion_scale = v;
    }
    if let Some(v) = &args.rate_range {
        spec.rate_range = (v[0], v[1]);
    }
    if let Some(v) = args.rank {
        spec.rank_profile = v;
    }
    if !args.inject.is_empty() {
        spec.arbitrage_injection = args.inject.clone();
    }
    if let Some(seed) = common.seed {
        spec.seed = seed;
    }
    Ok(spec)
}

fn cmd_gen(args: &GenArgs, common: &CommonArgs) -> CliResult {
    let spec = gen_spec(args, common)?;
    let out = common.out.as_deref().ok_or("gen needs --out")?;
    let (model, certificate) = if args.simulate {
        simulate_scenario(&spec)
    } else {
        generate(&spec)
    }
    .map_err(|e| e.to_string())?;
    write_model(out, &model).map_err(|e| e.to_string())?;
    write_certificate(sibling(out, "cert.json"), &certificate).map_err(|e| e.to_string())?;
    println!(
        "generated {} paths x {} times, {} securities, {} factors, {} injections -> {}",
        model.n_paths(),
        model.n_times(),
        model.n_securities(),
        model.n_factors(),
        certificate.injected.len(),
        out.display()
    );
    Ok(Status::Clean)
}

fn report_violations(model_path: &Path, report: &AnalysisReport) -> Result<(), String> {
    for idx in &report.violated {
        let v = report.verdicts.get(*idx);
        eprintln!(
            "arbitrage at path {}, t_index {}: residual {:e}{}",
            idx.path,
            idx.t_index,
            v.membership_residual,
            if v.is_marginal() { " (marginal)" } else { "" }
        );
    }
    let path = sibling(model_path, "violations.json");
    fs::write(&path, to_json_text(&report.violations_json())).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_analyze(model_path: &Path, common: &CommonArgs, tol: &ToleranceConfig) -> CliResult {
    let model = load_model(model_path)?;
    let report = analyze(&model, tol).map_err(|e| e.to_string())?;
    let text = match common.format {
        Format::Json => to_json_text(&report.to_json()),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf).map_err(|e| e.to_string())?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    emit(common.out.as_deref(), &text)?;
    if report.is_arbitrage_free() {
        Ok(Status::Clean)
    } else {
        report_violations(model_path, &report)?;
        Ok(Status::Arbitrage)
    }
}

#[derive(Serialize)]
struct CapmFile {
    holdings: Vec<Vec<Vec<f64>>>,
    lambda_star: Vec<Vec<Vec<f64>>>,
    max_capm_residual: f64,
}

fn cmd_capm(model_path: &Path, common: &CommonArgs, tol: &ToleranceConfig) -> CliResult {
    let model = load_model(model_path)?;
    match capm_strategy(&model, tol) {
        Ok(capm) => {
            let file = CapmFile {
                holdings: capm.holdings.holdings().to_nested(),
                lambda_star: capm.lambda_star.to_nested(),
                max_capm_residual: capm.max_residual,
            };
            emit(common.out.as_deref(), &to_json_text(&file))?;
            eprintln!("max_capm_residual {:e}", capm.max_residual);
            Ok(Status::Clean)
        }
        Err(EngineError::ArbitragePresent { .. }) => {
            let report = analyze(&model, tol).map_err(|e| e.to_string())?;
            report_violations(model_path, &report)?;
            Ok(Status::Arbitrage)
        }
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Serialize)]
struct CompletionFile {
    holdings: Vec<Vec<Vec<f64>>>,
    /// `max |𝒟(Θ)|` in money-market units.
    max_abs_dividend: f64,
    /// `max |Θ·S/M − 𝒢(Δ)|` in money-market units.
    max_value_gap: f64,
    /// `max |Θ − Δ|`, all in the money-market holding.
    max_adjustment: f64,
}

fn cmd_complete(model_path: &Path, strategy_path: &Path, common: &CommonArgs) -> CliResult {
    let model = load_model(model_path)?;
    let delta = load_strategy(strategy_path)?;
    let fail = |e: crate::market::MarketError| e.to_string();
    let theta = self_financing_completion(&delta, &model).map_err(fail)?;
    let before = strategy_ledger(&delta, &model, true).map_err(fail)?;
    let after = strategy_ledger(&theta, &model, true).map_err(fail)?;
    let max_value_gap = after
        .value
        .cells()
        .iter()
        .zip(before.gains.cells())
        .fold(0.0_f64, |m, (v, g)| m.max((v - g).abs()));
    let mm = model.money_market_index();
    let max_adjustment = theta
        .holdings()
        .iter()
        .fold(0.0_f64, |m, (idx, h)| m.max((h[mm] - delta.at(idx)[mm]).abs()));
    let file = CompletionFile {
        holdings: theta.holdings().to_nested(),
        max_abs_dividend: after.max_abs_dividend(),
        max_value_gap,
        max_adjustment,
    };
    emit(common.out.as_deref(), &to_json_text(&file))?;
    eprintln!(
        "max_abs_dividend {:e}, max_value_gap {:e}, max_adjustment {:e}",
        file.max_abs_dividend, max_value_gap, max_adjustment
    );
    Ok(Status::Clean)
}

#[derive(Serialize)]
struct RatesFile<'a> {
    consistent: bool,
    max_rate_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_normalized_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    differing: Option<&'a [SampleIndex]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    holdings: Option<Vec<Vec<Vec<f64>>>>,
    /// `b̄·μ` of the witness per sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    excess: Option<Vec<Vec<f64>>>,
}

fn cmd_rates(
    model_path: &Path,
    account_a: Option<usize>,
    account_b: usize,
    common: &CommonArgs,
    tol: &ToleranceConfig,
) -> CliResult {
    let model = load_model(model_path)?;
    let account = |i: Option<usize>| match i {
        None => Ok(MoneyMarketAccount::designated(&model)),
        Some(i) => MoneyMarketAccount::from_security(&model, i, tol).map_err(|e| format!("account {i}: {e}")),
    };
    let a = account(account_a)?;
    let b = account(Some(account_b))?;
    match rate_consistency(&a, &b, &model, tol).map_err(|e| e.to_string())? {
        RateConsistency::Consistent {
            max_rate_gap,
            max_normalized_gap,
        } => {
            let file = RatesFile {
                consistent: true,
                max_rate_gap,
                max_normalized_gap: Some(max_normalized_gap),
                differing: None,
                holdings: None,
                excess: None,
            };
            println!("consistent: max rate gap {max_rate_gap:e}, max normalized gap {max_normalized_gap:e}");
            if let Some(out) = &common.out {
                emit(Some(out), &to_json_text(&file))?;
            }
            Ok(Status::Clean)
        }
        RateConsistency::Inconsistent {
            witness,
            excess,
            differing,
            max_rate_gap,
        } => {
            let file = RatesFile {
                consistent: false,
                max_rate_gap,
                max_normalized_gap: None,
                differing: Some(&differing),
                holdings: Some(witness.holdings().to_nested()),
                excess: Some(Grid::to_nested(&excess)),
            };
            let text = to_json_text(&file);
            for idx in &differing {
                eprintln!("rates differ at path {}, t_index {}", idx.path, idx.t_index);
            }
            if let Some(out) = &common.out {
                emit(Some(out), &text)?;
            }
            let path = sibling(model_path, "violations.json");
            fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            Ok(Status::Arbitrage)
        }
    }
}
