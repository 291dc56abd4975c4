//! Two riskless accounts must grow at the same rate; where they do not, a
//! zero-cost riskless position earns the difference.
//!
//!     cargo run --example rate_consistency

use riskgate::engine::{rate_consistency, MoneyMarketAccount, RateConsistency};
use riskgate::kernel::{RealMatrix, ToleranceConfig};
use riskgate::market::{MarketModel, MarketSample};
use riskgate::Grid;

/// Money market at 3%, a deposit account at `deposit[k]`, one risky stock.
fn market(deposit: &[f64]) -> MarketModel {
    let dt = 0.25_f64;
    let (mut m, mut d) = (1.0_f64, 100.0_f64);
    let mut cells = Vec::new();
    for (k, &rd) in deposit.iter().enumerate() {
        if k > 0 {
            m *= (0.03 * dt).exp();
            d *= (deposit[k - 1] * dt).exp();
        }
        cells.push(MarketSample {
            prices: vec![m, d, 50.0],
            drifts: vec![0.03 * m, rd * d, 4.0],
            dispersion: RealMatrix::from_rows(&[[0.0], [0.0], [10.0]]).unwrap(),
            short_rate: 0.03,
            deflator: m,
            cum_dividends: vec![0.0; 3],
        });
    }
    let times = (0..deposit.len()).map(|k| k as f64 * dt).collect();
    MarketModel::new(times, Grid::from_cells(1, deposit.len(), cells).unwrap(), 0, None, None).unwrap()
}

fn main() {
    let tol = ToleranceConfig::default();
    for deposit in [vec![0.03; 5], vec![0.03, 0.03, 0.035, 0.03, 0.02]] {
        let model = market(&deposit);
        let a = MoneyMarketAccount::designated(&model);
        let b = MoneyMarketAccount::from_security(&model, 1, &tol).unwrap();
        match rate_consistency(&a, &b, &model, &tol).unwrap() {
            RateConsistency::Consistent { max_normalized_gap, .. } => {
                println!("deposit rates {deposit:?}: consistent, normalized values differ by {max_normalized_gap:.1e}");
            }
            RateConsistency::Inconsistent { witness, excess, differing, .. } => {
                println!("deposit rates {deposit:?}: rates differ at {differing:?}");
                for idx in differing {
                    let h = witness.at(idx);
                    let s = model.sample(idx);
                    let cost: f64 = h.iter().zip(&s.prices).map(|(a, b)| a * b).sum();
                    println!("  {idx}: hold {h:.5?}, cost {cost:.1e}, earns {:.4} per year", excess.get(idx));
                }
            }
        }
    }
}
