//! Batch analysis with JSON and CSV reports, as written by `riskgate analyze`.
//!
//!     cargo run --example analysis_report

use riskgate::engine::analyze;
use riskgate::kernel::ToleranceConfig;
use riskgate::scenario::{generate, Injection, ScenarioSpec};

fn main() {
    let spec = ScenarioSpec::new(4, 2, 2, 2, 11)
        .with_injections(vec![Injection { path: 1, t_index: 1, strength: 0.4 }]);
    let (model, _) = generate(&spec).unwrap();
    let report = analyze(&model, &ToleranceConfig::default()).unwrap();

    println!("arbitrage free: {}, free samples {}/{}", report.is_arbitrage_free(), report.free_count(), model.samples().len());
    println!("{}", serde_json::to_string_pretty(&report.to_json()["summary"]).unwrap());
    println!("{}", serde_json::to_string_pretty(&report.violations_json()).unwrap());

    let mut csv = Vec::new();
    report.write_csv(&mut csv).unwrap();
    print!("{}", String::from_utf8(csv).unwrap());
}
