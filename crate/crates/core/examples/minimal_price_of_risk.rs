//! Every price of risk differs from the minimal one by a null-space
//! component, which only adds length.
//!
//!     cargo run --example minimal_price_of_risk

use riskgate::engine::{classify_sample, minimality_gap, price_of_risk_check};
use riskgate::kernel::{norm, orthonormal_row_projector, ToleranceConfig};
use riskgate::scenario::{generate, ScenarioSpec};
use riskgate::SampleIndex;

fn main() {
    let tol = ToleranceConfig::default();
    // 3 risky securities on 5 factors: σ has a 2-dimensional null space
    let (model, cert) = generate(&ScenarioSpec::new(4, 5, 1, 1, 3)).unwrap();
    let idx = SampleIndex::new(0, 0);
    let s = model.sample(idx);
    let v = classify_sample(s, model.money_market_index(), &tol);
    let lambda_star = v.lambda_star().unwrap();
    println!("λ*      = {lambda_star:.4?} (‖λ*‖ = {:.4})", norm(lambda_star));

    let planted = cert.planted(idx);
    println!("planted = {planted:.4?} (‖λ‖ = {:.4})", norm(planted));
    println!("planted λ prices the sample: {}", price_of_risk_check(planted, s, &tol).unwrap());
    println!("‖λ‖² − ‖λ*‖² = {:.6}", minimality_gap(planted, &v, s, &tol).unwrap());

    // the difference lies in the null space of σ
    let rows = orthonormal_row_projector(&s.dispersion, &tol);
    let diff: Vec<f64> = planted.iter().zip(lambda_star).map(|(a, b)| a - b).collect();
    println!("component of λ − λ* inside the row span of σ: {:.1e}", norm(&rows.coordinates(&diff)));
}
