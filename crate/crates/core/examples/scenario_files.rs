//! Generate a scenario from a JSON spec, write the model and its
//! certificate, and read them back.
//!
//!     cargo run --example scenario_files

use riskgate::scenario::{generate, ingest, read_certificate, write_certificate, write_model, ScenarioSpec};

const SPEC: &str = r#"{
    "n_securities": 6,
    "n_factors": 3,
    "n_paths": 2,
    "n_steps": 5,
    "rank_profile": {"deficient": 2},
    "arbitrage_injection": [{"path": 1, "t_index": 3, "strength": 0.2}],
    "seed": 2718
}"#;

fn main() {
    let spec: ScenarioSpec = serde_json::from_str(SPEC).unwrap();
    let (model, cert) = generate(&spec).unwrap();
    println!(
        "{} paths x {} times, {} securities on {} factors, rank {}",
        model.n_paths(),
        model.n_times(),
        model.n_securities(),
        model.n_factors(),
        spec.rank()
    );

    let dir = std::env::temp_dir().join(format!("riskgate-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (model_path, cert_path) = (dir.join("model.json"), dir.join("model.cert.json"));
    write_model(&model_path, &model).unwrap();
    write_certificate(&cert_path, &cert).unwrap();
    println!("wrote {} ({} bytes)", model_path.display(), std::fs::metadata(&model_path).unwrap().len());

    assert_eq!(ingest(&model_path).unwrap(), model);
    assert_eq!(read_certificate(&cert_path).unwrap(), cert);
    println!("read back identical model; injected samples {:?}", cert.injected);

    let bad = std::fs::read_to_string(&model_path).unwrap().replacen("\"M\": 1.0", "\"M\": -1.0", 1);
    println!("corrupted deflator: {}", riskgate::scenario::ingest_str(&bad).unwrap_err());
    std::fs::remove_dir_all(&dir).unwrap();
}
