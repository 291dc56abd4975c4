//! Value, gains and dividend processes of trading strategies.

use crate::grid::{Grid, SampleIndex};
use crate::kernel::dot;

use super::{deflate_dividends, MarketError, MarketModel, TradingStrategy};

/// Value `Δ̄·S̄`, cumulative gains `𝒢(Δ̄)` and cumulative dividends `𝒟(Δ̄)`
/// of a strategy at every grid point, with `value + dividends = gains`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyLedger {
    pub value: Grid<f64>,
    pub gains: Grid<f64>,
    pub dividends: Grid<f64>,
}

impl StrategyLedger {
    pub fn max_abs_dividend(&self) -> f64 {
        max_abs(self.dividends.cells())
    }

    pub fn max_abs_value(&self) -> f64 {
        max_abs(self.value.cells())
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Price and gains vectors along one path, optionally in money-market units.
/// One vector per time point.
type Series = Vec<Vec<f64>>;

fn path_prices_and_gains(model: &MarketModel, path: usize, deflated: bool) -> Result<(Series, Series), MarketError> {
    let samples = model.samples().path(path);
    let n = model.n_securities();
    if !deflated {
        let prices = samples.iter().map(|s| s.prices.clone()).collect();
        let gains = samples
            .iter()
            .map(|s| s.prices.iter().zip(&s.cum_dividends).map(|(p, d)| p + d).collect())
            .collect();
        return Ok((prices, gains));
    }
    let rates: Vec<f64> = samples.iter().map(|s| s.short_rate).collect();
    let deflators: Vec<f64> = samples.iter().map(|s| s.deflator).collect();
    let mut deflated_dividends = vec![Vec::new(); n];
    for (i, slot) in deflated_dividends.iter_mut().enumerate() {
        let d: Vec<f64> = samples.iter().map(|s| s.cum_dividends[i]).collect();
        *slot = deflate_dividends(&d, &rates, &deflators, model.times())?;
    }
    let prices: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| s.prices.iter().map(|p| p / s.deflator).collect())
        .collect();
    let gains = prices
        .iter()
        .enumerate()
        .map(|(k, p)| p.iter().enumerate().map(|(i, pi)| pi + deflated_dividends[i][k]).collect())
        .collect();
    Ok((prices, gains))
}

/// Accumulates the ledger of `strategy` along every path with the
/// left-point rule `𝒢_{k+1} = 𝒢_k + Δ_k·(G_{k+1} − G_k)`, `𝒢_0 = Δ_0·G_0`.
///
/// With `deflated`, prices are `S̄/M` and gains use `D̄^{1/M}`.
pub fn strategy_ledger(
    strategy: &TradingStrategy,
    model: &MarketModel,
    deflated: bool,
) -> Result<StrategyLedger, MarketError> {
    strategy.check_against(model)?;
    if !model.has_realized_paths() {
        return Err(MarketError::MissingIncrements);
    }
    let (n_paths, n_times) = (model.n_paths(), model.n_times());
    let mut value = Vec::with_capacity(n_paths * n_times);
    let mut gains = Vec::with_capacity(n_paths * n_times);
    let mut dividends = Vec::with_capacity(n_paths * n_times);
    for path in 0..n_paths {
        let (prices, g) = path_prices_and_gains(model, path, deflated)?;
        let mut acc = 0.0;
        for k in 0..n_times {
            let delta_k = strategy.at(SampleIndex::new(path, k));
            if k == 0 {
                acc = dot(delta_k, &g[0]);
            } else {
                let prev = strategy.at(SampleIndex::new(path, k - 1));
                let increment: Vec<f64> = g[k].iter().zip(&g[k - 1]).map(|(a, b)| a - b).collect();
                acc += dot(prev, &increment);
            }
            let v = dot(delta_k, &prices[k]);
            value.push(v);
            gains.push(acc);
            dividends.push(if k == 0 { 0.0 } else { acc - v });
        }
    }
    let wrap = |cells| Grid::from_cells(n_paths, n_times, cells).expect("grid sized above");
    Ok(StrategyLedger {
        value: wrap(value),
        gains: wrap(gains),
        dividends: wrap(dividends),
    })
}

/// A strategy is self-financing when `max |𝒟| ≤ tol · (1 + max |value|)`.
pub fn self_financing_check(ledger: &StrategyLedger, tol: f64) -> bool {
    ledger.max_abs_dividend() <= tol * (1.0 + ledger.max_abs_value())
}

/// `Θ̄ = Δ̄ + 𝒟(Δ̄; S̄/M, D̄^{1/M})·b̄`: reinvests the deflated dividends of
/// `Δ̄` in the money market so the result is self-financing.
///
/// Only the money-market holding changes, so `Θ̄σ̄ = Δ̄σ̄` and
/// `Θ̄(μ̄ − rS̄) = Δ̄(μ̄ − rS̄)`.
pub fn self_financing_completion(
    strategy: &TradingStrategy,
    model: &MarketModel,
) -> Result<TradingStrategy, MarketError> {
    let ledger = strategy_ledger(strategy, model, true)?;
    let mm = model.money_market_index();
    let holdings = strategy.holdings().map(|idx, h| {
        let mut theta = h.clone();
        theta[mm] += *ledger.dividends.get(idx);
        theta
    });
    TradingStrategy::new(holdings)
}
