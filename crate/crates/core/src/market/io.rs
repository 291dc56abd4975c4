//! JSON file schemas for market models and strategies.
//!
//! Model file:
//!
//! ```json
//! { "n_securities": 2, "n_factors": 1, "n_paths": 1, "times": [0.0, 0.5],
//!   "money_market_index": 0,
//!   "samples": [[{"S": [1.0, 10.0], "mu": [0.05, 1.0], "sigma": [0.0, 2.0],
//!                 "r": 0.05, "M": 1.0, "D": [0.0, 0.0]}, …]],
//!   "dW": [[[0.1], …]], "seed": 7 }
//! ```
//!
//! `sigma` is row-major `(N + 1) × K`; `dW` and `seed` are optional.
//! Strategy file: `{ "holdings": [path][time][security] }`.

use serde::{Deserialize, Serialize};

use crate::grid::{Grid, SampleIndex};
use crate::kernel::RealMatrix;

use super::{Location, MarketError, MarketModel, MarketSample, TradingStrategy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleRecord {
    #[serde(rename = "S")]
    pub prices: Vec<f64>,
    pub mu: Vec<f64>,
    pub sigma: Vec<f64>,
    pub r: f64,
    #[serde(rename = "M")]
    pub deflator: f64,
    #[serde(rename = "D")]
    pub dividends: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub n_securities: usize,
    pub n_factors: usize,
    pub n_paths: usize,
    pub times: Vec<f64>,
    #[serde(default)]
    pub money_market_index: usize,
    pub samples: Vec<Vec<SampleRecord>>,
    #[serde(rename = "dW", default, skip_serializing_if = "Option::is_none")]
    pub wiener_increments: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SampleRecord {
    pub fn from_sample(s: &MarketSample) -> Self {
        Self {
            prices: s.prices.clone(),
            mu: s.drifts.clone(),
            sigma: s.dispersion.entries().to_vec(),
            r: s.short_rate,
            deflator: s.deflator,
            dividends: s.cum_dividends.clone(),
        }
    }

    /// Checks lengths against the declared dimensions and builds a sample.
    pub fn to_sample(
        &self,
        n_securities: usize,
        n_factors: usize,
        idx: SampleIndex,
    ) -> Result<MarketSample, MarketError> {
        for (field, len, expected) in [
            ("S", self.prices.len(), n_securities),
            ("mu", self.mu.len(), n_securities),
            ("D", self.dividends.len(), n_securities),
            ("sigma", self.sigma.len(), n_securities * n_factors),
        ] {
            if len != expected {
                return Err(MarketError::shape(Location::sample(idx, field), expected, len));
            }
        }
        let dispersion = RealMatrix::new(n_securities, n_factors, self.sigma.clone()).map_err(|_| {
            MarketError::invariant(Location::sample(idx, "sigma"), "entries must be finite")
        })?;
        Ok(MarketSample {
            prices: self.prices.clone(),
            drifts: self.mu.clone(),
            dispersion,
            short_rate: self.r,
            deflator: self.deflator,
            cum_dividends: self.dividends.clone(),
        })
    }
}

impl ModelFile {
    pub fn from_model(model: &MarketModel) -> Self {
        Self {
            n_securities: model.n_securities(),
            n_factors: model.n_factors(),
            n_paths: model.n_paths(),
            times: model.times().to_vec(),
            money_market_index: model.money_market_index(),
            samples: (0..model.n_paths())
                .map(|p| model.samples().path(p).iter().map(SampleRecord::from_sample).collect())
                .collect(),
            wiener_increments: model.wiener_increments().map(Grid::to_nested),
            seed: model.seed(),
        }
    }

    /// Shape checks against the declared dimensions, then full model
    /// validation.
    pub fn into_model(self) -> Result<MarketModel, MarketError> {
        if self.n_securities == 0 || self.n_factors == 0 {
            return Err(MarketError::invariant(
                Location::field("n_securities/n_factors"),
                "must be positive",
            ));
        }
        if self.samples.len() != self.n_paths {
            return Err(MarketError::shape(
                Location::field("samples"),
                self.n_paths,
                self.samples.len(),
            ));
        }
        let n_times = self.times.len();
        let mut cells = Vec::with_capacity(self.n_paths * n_times);
        for (p, path) in self.samples.iter().enumerate() {
            if path.len() != n_times {
                return Err(MarketError::shape(
                    Location::field(format!("samples[{p}]")),
                    n_times,
                    path.len(),
                ));
            }
            for (t, rec) in path.iter().enumerate() {
                cells.push(rec.to_sample(self.n_securities, self.n_factors, SampleIndex::new(p, t))?);
            }
        }
        let samples = Grid::from_cells(self.n_paths, n_times, cells).expect("sized above");
        let increments = match self.wiener_increments {
            None => None,
            Some(nested) => {
                let steps = n_times.saturating_sub(1);
                if nested.len() != self.n_paths || nested.iter().any(|p| p.len() != steps) {
                    return Err(MarketError::shape(
                        Location::field("dW"),
                        self.n_paths * steps,
                        nested.iter().map(Vec::len).sum(),
                    ));
                }
                Grid::from_nested(nested)
            }
        };
        MarketModel::new(self.times, samples, self.money_market_index, increments, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyFile {
    pub holdings: Vec<Vec<Vec<f64>>>,
}

impl StrategyFile {
    pub fn from_strategy(strategy: &TradingStrategy) -> Self {
        Self {
            holdings: strategy.holdings().to_nested(),
        }
    }

    pub fn into_strategy(self) -> Result<TradingStrategy, MarketError> {
        let grid = Grid::from_nested(self.holdings).ok_or_else(|| {
            MarketError::invariant(Location::field("holdings"), "paths have unequal lengths")
        })?;
        TradingStrategy::new(grid)
    }
}
