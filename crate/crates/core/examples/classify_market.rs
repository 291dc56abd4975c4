//! Classify every sample of a generated market, two of which carry planted
//! arbitrage, and turn the violations into zero-value arbitrage strategies.
//!
//!     cargo run --example classify_market

use riskgate::engine::{classify_grid, Outcome};
use riskgate::kernel::{dot, norm, ToleranceConfig};
use riskgate::scenario::{generate, Injection, ScenarioSpec};

fn main() {
    let tol = ToleranceConfig::default();
    let spec = ScenarioSpec::new(5, 2, 2, 4, 42).with_injections(vec![
        Injection { path: 0, t_index: 2, strength: 0.05 },
        Injection { path: 1, t_index: 4, strength: 1e-3 },
    ]);
    let (model, cert) = generate(&spec).unwrap();
    println!("planted arbitrage at {:?}", cert.injected);

    for (idx, v) in classify_grid(&model, &tol).iter() {
        match &v.outcome {
            Outcome::Free { lambda_star, .. } => {
                println!("{idx}: free, ‖λ*‖ = {:.4}", norm(lambda_star));
            }
            Outcome::Violated { theta, excess_margin, marginal, .. } => {
                let s = model.sample(idx);
                println!(
                    "{idx}: arbitrage (residual {:.1e}{}), Θ·S = {:.1e}, ‖Θσ‖ = {:.1e}, Θ·(μ − rS) = {excess_margin:.6}",
                    v.membership_residual,
                    if *marginal { ", marginal" } else { "" },
                    dot(theta, &s.prices),
                    norm(&s.dispersion.row_mul(theta).unwrap()),
                );
            }
        }
    }
}
