//! Build the strategy whose fundamental betas price every security, and
//! compare with the betas of an arbitrary portfolio.
//!
//!     cargo run --example capm_strategy

use riskgate::engine::{capm_residual, capm_strategy, fundamental_betas};
use riskgate::kernel::{norm, ToleranceConfig};
use riskgate::scenario::{generate, ScenarioSpec};
use riskgate::SampleIndex;

fn main() {
    let tol = ToleranceConfig::default();
    let (model, _) = generate(&ScenarioSpec::new(5, 3, 1, 3, 8)).unwrap();
    let capm = capm_strategy(&model, &tol).unwrap();
    println!("max CAPM residual over the grid: {:.2e}", capm.max_residual);

    let idx = SampleIndex::new(0, 1);
    let s = model.sample(idx);
    let psi = capm.holdings.at(idx);
    println!("ψ at {idx} = {psi:.4?}");
    println!("betas of ψ   = {:.4?}", fundamental_betas(psi, s, &tol).unwrap());
    println!("excess drift = {:.4?}", s.excess_drift());

    let equal_weight = vec![0.0, 1.0, 1.0, 1.0, 1.0];
    let r = capm_residual(&equal_weight, s, &tol).unwrap();
    println!("equal-weight portfolio misprices by {:.4} (‖residual‖)", norm(&r));

    // the money market is riskless, so its betas are zero by convention
    println!("money-market betas = {:?}", fundamental_betas(&model.money_market_strategy(), s, &tol).unwrap());
}
