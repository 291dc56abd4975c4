//! Euler–Maruyama paths of a two-factor market with a seeded,
//! per-path random stream.
//!
//!     cargo run --example simulate_paths

use riskgate::kernel::RealMatrix;
use riskgate::market::{simulate_paths, ConstantCoefficients, SimulationTemplate};

fn main() {
    let coefficients = ConstantCoefficients {
        drifts: vec![0.0, 3.0, 1.0],
        dispersion: RealMatrix::from_rows(&[[0.0, 0.0], [8.0, 2.0], [1.0, 4.0]]).unwrap(),
    };
    let template = SimulationTemplate::uniform(3, 12, 1.0, vec![1.0, 50.0, 20.0], 0.04, 2, coefficients);
    let model = simulate_paths(&template, 99).unwrap();

    for p in 0..model.n_paths() {
        let prices: Vec<String> = model.samples().path(p).iter().map(|s| format!("{:.2}", s.prices[1])).collect();
        println!("path {p}, security 1: {}", prices.join(" "));
    }
    let last = model.samples().at(0, 12);
    println!("money market after one year: {:.6} (e^0.04 = {:.6})", last.deflator, 0.04_f64.exp());

    let dw = model.wiener_increments().unwrap();
    let n = dw.cells().len() as f64 * 2.0;
    let var = dw.cells().iter().flatten().map(|x| x * x).sum::<f64>() / n;
    println!("mean squared increment {var:.4} against Δt = {:.4}", 1.0 / 12.0);

    assert_eq!(simulate_paths(&template, 99).unwrap(), model);
    println!("same seed, same paths");
}
