use crate::grid::SampleIndex;
use crate::kernel::{dot, norm, RealMatrix, ToleranceConfig};
use crate::market::{MarketModel, MarketSample, TradingStrategy};

use super::EngineError;

/// `‖Δσ‖ ≤ tol · (1 + ‖Δ‖·‖σ‖_F)`, given the exposure `Δσ`.
pub(crate) fn riskless_holding(
    delta: &[f64],
    exposure: &[f64],
    sigma: &RealMatrix,
    tol: &ToleranceConfig,
) -> bool {
    norm(exposure) <= tol.residual_tol * (1.0 + norm(delta) * sigma.frobenius_norm())
}

/// Whether the holding `Δ` carries no instantaneous risk at this sample.
pub fn is_riskless(delta: &[f64], sample: &MarketSample, tol: &ToleranceConfig) -> Result<bool, EngineError> {
    let exposure = sample.dispersion.row_mul(delta)?;
    Ok(riskless_holding(delta, &exposure, &sample.dispersion, tol))
}

fn positive_excess(delta: &[f64], sample: &MarketSample, tol: &ToleranceConfig) -> bool {
    let e = sample.excess_drift();
    dot(delta, &e) > tol.residual_tol * (1.0 + norm(delta) * norm(&e))
}

/// Samples where `Δ` is riskless yet earns a positive expected excess return.
pub fn arbitrage_set(
    strategy: &TradingStrategy,
    model: &MarketModel,
    tol: &ToleranceConfig,
) -> Result<Vec<SampleIndex>, EngineError> {
    strategy.check_against(model)?;
    let mut set = Vec::new();
    for (idx, delta) in strategy.holdings().iter() {
        let sample = model.sample(idx);
        if is_riskless(delta, sample, tol)? && positive_excess(delta, sample, tol) {
            set.push(idx);
        }
    }
    Ok(set)
}

/// `Θ = Δ − (Δ·S / M)·b̄` on the flagged samples and zero elsewhere.
///
/// Every flagged sample must have `Δ` riskless with positive excess return.
/// The result has zero value everywhere and the same excess return as `Δ`
/// on the flagged samples.
pub fn zero_value_certificate(
    strategy: &TradingStrategy,
    model: &MarketModel,
    flagged: &[SampleIndex],
    tol: &ToleranceConfig,
) -> Result<TradingStrategy, EngineError> {
    strategy.check_against(model)?;
    let mm = model.money_market_index();
    let mut holdings = TradingStrategy::zeros(model).into_holdings();
    for &idx in flagged {
        if !holdings.contains(idx) {
            return Err(EngineError::OutsideGrid(idx));
        }
        let sample = model.sample(idx);
        let delta = strategy.at(idx);
        if !is_riskless(delta, sample, tol)? {
            return Err(EngineError::NotRiskless(idx));
        }
        if !positive_excess(delta, sample, tol) {
            return Err(EngineError::NoPositiveExcess(idx));
        }
        let mut theta = delta.to_vec();
        theta[mm] -= dot(delta, &sample.prices) / sample.prices[mm];
        *holdings.get_mut(idx) = theta;
    }
    Ok(TradingStrategy::new(holdings)?)
}
