use crate::grid::{Grid, SampleIndex};

use super::{Location, MarketError, MarketModel};

/// Holdings `Δ̄` per grid point, one entry per security.
#[derive(Debug, Clone, PartialEq)]
pub struct TradingStrategy {
    holdings: Grid<Vec<f64>>,
}

impl TradingStrategy {
    /// Wraps holdings, checking finiteness and uniform width.
    pub fn new(holdings: Grid<Vec<f64>>) -> Result<Self, MarketError> {
        let width = holdings.cells().first().map_or(0, Vec::len);
        for (idx, h) in holdings.iter() {
            if h.len() != width {
                return Err(MarketError::shape(Location::sample(idx, "holdings"), width, h.len()));
            }
            if h.iter().any(|v| !v.is_finite()) {
                return Err(MarketError::invariant(
                    Location::sample(idx, "holdings"),
                    "holding is not finite",
                ));
            }
        }
        Ok(Self { holdings })
    }

    pub fn zeros(model: &MarketModel) -> Self {
        Self::constant(model, &vec![0.0; model.n_securities()])
    }

    /// The same holdings at every grid point.
    pub fn constant(model: &MarketModel, holding: &[f64]) -> Self {
        Self {
            holdings: Grid::from_fn(model.n_paths(), model.n_times(), |_| holding.to_vec()),
        }
    }

    pub fn from_fn(model: &MarketModel, f: impl FnMut(SampleIndex) -> Vec<f64>) -> Result<Self, MarketError> {
        let s = Self::new(Grid::from_fn(model.n_paths(), model.n_times(), f))?;
        s.check_against(model)?;
        Ok(s)
    }

    pub fn holdings(&self) -> &Grid<Vec<f64>> {
        &self.holdings
    }

    pub fn at(&self, idx: SampleIndex) -> &[f64] {
        self.holdings.get(idx)
    }

    pub fn into_holdings(self) -> Grid<Vec<f64>> {
        self.holdings
    }

    /// Grid shape and width must match the model.
    pub fn check_against(&self, model: &MarketModel) -> Result<(), MarketError> {
        if !self.holdings.same_shape(model.samples()) {
            return Err(MarketError::shape(
                Location::field("holdings"),
                model.n_paths() * model.n_times(),
                self.holdings.n_paths() * self.holdings.n_times(),
            ));
        }
        if let Some(h) = self.holdings.cells().first() {
            if h.len() != model.n_securities() {
                return Err(MarketError::shape(
                    Location::sample(SampleIndex::new(0, 0), "holdings"),
                    model.n_securities(),
                    h.len(),
                ));
            }
        }
        Ok(())
    }
}
