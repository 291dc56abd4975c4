//! Reinvest a strategy's dividends in the money market so the result is
//! self-financing without changing its risk or expected excess return.
//!
//!     cargo run --example self_financing_completion

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riskgate::kernel::RealMatrix;
use riskgate::market::{
    self_financing_check, self_financing_completion, simulate_paths, strategy_ledger,
    ProportionalCoefficients, SimulationTemplate, TradingStrategy,
};

fn main() {
    let coefficients = ProportionalCoefficients {
        growth: vec![0.0, 0.07, 0.05],
        volatility: RealMatrix::from_rows(&[[0.0, 0.0], [0.2, 0.05], [0.1, 0.25]]).unwrap(),
    };
    let template = SimulationTemplate::uniform(4, 250, 1.0, vec![1.0, 40.0, 25.0], 0.03, 2, coefficients)
        .with_dividend_rates(vec![0.0, 1.2, 0.4]);
    let model = simulate_paths(&template, 17).unwrap();

    // weekly rebalancing to random weights
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut current = vec![0.0, 1.0, 1.0];
    let delta = TradingStrategy::from_fn(&model, |idx| {
        if idx.t_index % 5 == 0 {
            current = vec![0.0, rng.random_range(0.0..2.0), rng.random_range(0.0..2.0)];
        }
        current.clone()
    })
    .unwrap();

    let before = strategy_ledger(&delta, &model, true).unwrap();
    println!(
        "Δ: max |deflated dividends| {:.4}, self-financing {}",
        before.max_abs_dividend(),
        self_financing_check(&before, 1e-9)
    );
    let theta = self_financing_completion(&delta, &model).unwrap();
    let after = strategy_ledger(&theta, &model, true).unwrap();
    println!(
        "Θ: max |deflated dividends| {:.1e}, self-financing {}",
        after.max_abs_dividend(),
        self_financing_check(&after, 1e-9)
    );
    let last = model.n_times() - 1;
    for p in 0..model.n_paths() {
        println!(
            "path {p}: deflated gains of Δ {:.6}, deflated value of Θ {:.6}, money-market units added {:.4}",
            before.gains.at(p, last),
            after.value.at(p, last),
            theta.holdings().at(p, last)[0] - delta.holdings().at(p, last)[0]
        );
    }
}
