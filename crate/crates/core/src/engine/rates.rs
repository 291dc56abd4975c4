use crate::grid::{Grid, SampleIndex};
use crate::kernel::{dot, ToleranceConfig};
use crate::market::{money_market_path, MarketModel, TradingStrategy};

use super::certificate::is_riskless;
use super::EngineError;

/// A riskless strategy with positive value that grows at a locally riskless
/// rate: `b̄σ = 0`, `b̄·S = value > 0`, `b̄·μ = rate · value`.
#[derive(Debug, Clone, PartialEq)]
pub struct MoneyMarketAccount {
    pub holdings: TradingStrategy,
    pub values: Grid<f64>,
    pub rates: Grid<f64>,
}

impl MoneyMarketAccount {
    /// Validates the account conditions against `model`.
    pub fn new(
        holdings: TradingStrategy,
        values: Grid<f64>,
        rates: Grid<f64>,
        model: &MarketModel,
        tol: &ToleranceConfig,
    ) -> Result<Self, EngineError> {
        let account = Self {
            holdings,
            values,
            rates,
        };
        account.validate(model, tol)?;
        Ok(account)
    }

    /// The model's designated money market.
    pub fn designated(model: &MarketModel) -> Self {
        Self {
            holdings: TradingStrategy::constant(model, &model.money_market_strategy()),
            values: model.samples().map(|_, s| s.deflator),
            rates: model.samples().map(|_, s| s.short_rate),
        }
    }

    /// One unit of security `index`, with rate `μ_i / S_i`.
    pub fn from_security(model: &MarketModel, index: usize, tol: &ToleranceConfig) -> Result<Self, EngineError> {
        if index >= model.n_securities() {
            return Err(EngineError::NotAMoneyMarketAccount(format!(
                "security index {index} out of range"
            )));
        }
        let mut unit = vec![0.0; model.n_securities()];
        unit[index] = 1.0;
        let values = model.samples().map(|_, s| s.prices[index]);
        let rates = model.samples().map(|_, s| s.drifts[index] / s.prices[index]);
        Self::new(TradingStrategy::constant(model, &unit), values, rates, model, tol)
    }

    pub fn validate(&self, model: &MarketModel, tol: &ToleranceConfig) -> Result<(), EngineError> {
        self.holdings.check_against(model)?;
        let grid_ok = self.values.n_paths() == model.n_paths()
            && self.values.n_times() == model.n_times()
            && self.rates.same_shape(&self.values);
        if !grid_ok {
            return Err(EngineError::NotAMoneyMarketAccount(
                "values and rates must cover the model grid".into(),
            ));
        }
        let fail = |idx: SampleIndex, what: &str| {
            Err(EngineError::NotAMoneyMarketAccount(format!("{what} at {idx}")))
        };
        for (idx, b) in self.holdings.holdings().iter() {
            let s = model.sample(idx);
            let value = *self.values.get(idx);
            let rate = *self.rates.get(idx);
            if !(value.is_finite() && value > 0.0 && rate.is_finite()) {
                return fail(idx, "value must be positive and rate finite");
            }
            if !is_riskless(b, s, tol)? {
                return fail(idx, "holding carries risk");
            }
            if (dot(b, &s.prices) - value).abs() > tol.residual_tol * (1.0 + value) {
                return fail(idx, "holding value differs from account value");
            }
            let growth = dot(b, &s.drifts);
            if (growth - rate * value).abs() > tol.residual_tol * (1.0 + growth.abs()) {
                return fail(idx, "drift differs from rate times value");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RateConsistency {
    /// Rates agree at every sample, so the accounts grow alike.
    Consistent {
        max_rate_gap: f64,
        /// `max |V_a/V_a(0) − V_b/V_b(0)|` with each account grown at its
        /// own rates, `V(t_k) = V(0)·exp(Σ_{j<k} r_j Δt_j)`.
        max_normalized_gap: f64,
    },
    /// A zero-value riskless strategy earns `|r_a − r_b|` wherever the rates
    /// differ.
    Inconsistent {
        witness: TradingStrategy,
        /// `b̄·μ` of the witness at every sample.
        excess: Grid<f64>,
        differing: Vec<SampleIndex>,
        max_rate_gap: f64,
    },
}

impl RateConsistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Self::Consistent { .. })
    }

    pub fn max_rate_gap(&self) -> f64 {
        match self {
            Self::Consistent { max_rate_gap, .. } | Self::Inconsistent { max_rate_gap, .. } => {
                *max_rate_gap
            }
        }
    }
}

/// Compares two money market accounts of the same model.
///
/// Where `|r_a − r_b|` exceeds the tolerance the witness holds
/// `±(b̄_a / V_a − b̄_b / V_b)`, long the faster account; elsewhere it holds
/// nothing, so its excess return is nonnegative everywhere.
pub fn rate_consistency(
    a: &MoneyMarketAccount,
    b: &MoneyMarketAccount,
    model: &MarketModel,
    tol: &ToleranceConfig,
) -> Result<RateConsistency, EngineError> {
    a.validate(model, tol)?;
    b.validate(model, tol)?;
    let mut max_rate_gap = 0.0_f64;
    let mut differing = Vec::new();
    for (idx, ra) in a.rates.iter() {
        let rb = *b.rates.get(idx);
        let gap = (ra - rb).abs();
        max_rate_gap = max_rate_gap.max(gap);
        if gap > tol.residual_tol * (1.0 + ra.abs().max(rb.abs())) {
            differing.push(idx);
        }
    }

    if differing.is_empty() {
        let n_steps = model.n_steps();
        let mut max_normalized_gap = 0.0_f64;
        for p in 0..model.n_paths() {
            let ga = money_market_path(&a.rates.path(p)[..n_steps], 1.0, model.times())?;
            let gb = money_market_path(&b.rates.path(p)[..n_steps], 1.0, model.times())?;
            for (x, y) in ga.iter().zip(&gb) {
                max_normalized_gap = max_normalized_gap.max((x - y).abs());
            }
        }
        return Ok(RateConsistency::Consistent {
            max_rate_gap,
            max_normalized_gap,
        });
    }

    let mut holdings = TradingStrategy::zeros(model).into_holdings();
    for &idx in &differing {
        let sign = if a.rates.get(idx) > b.rates.get(idx) { 1.0 } else { -1.0 };
        let (va, vb) = (*a.values.get(idx), *b.values.get(idx));
        *holdings.get_mut(idx) = a
            .holdings
            .at(idx)
            .iter()
            .zip(b.holdings.at(idx))
            // `+ 0.0` turns −0.0 into 0.0
            .map(|(ha, hb)| sign * (ha / va - hb / vb) + 0.0)
            .collect();
    }
    let witness = TradingStrategy::new(holdings)?;
    let excess = witness
        .holdings()
        .map(|idx, h| dot(h, &model.sample(idx).drifts));
    Ok(RateConsistency::Inconsistent {
        witness,
        excess,
        differing,
        max_rate_gap,
    })
}
