use crate::kernel::RealMatrix;

use super::{nearly_equal, Location, MarketError};

/// Market state at one (path, time) grid point.
///
/// Vectors are indexed by security (`N + 1` entries); `dispersion` is
/// `(N + 1) × K`. Units: prices and dividends in currency, drifts in
/// currency per year, dispersion in currency per √year, `short_rate` per
/// year.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketSample {
    pub prices: Vec<f64>,
    pub drifts: Vec<f64>,
    pub dispersion: RealMatrix,
    pub short_rate: f64,
    pub deflator: f64,
    pub cum_dividends: Vec<f64>,
}

impl MarketSample {
    pub fn n_securities(&self) -> usize {
        self.prices.len()
    }

    pub fn n_factors(&self) -> usize {
        self.dispersion.n_cols()
    }

    /// Checks shapes, finiteness and the money-market invariants.
    pub fn validate(&self, money_market_index: usize) -> Result<(), MarketError> {
        let n = self.prices.len();
        if n == 0 {
            return Err(MarketError::invariant(
                Location::field("S"),
                "at least one security is required",
            ));
        }
        if self.dispersion.n_cols() == 0 {
            return Err(MarketError::invariant(
                Location::field("sigma"),
                "at least one factor is required",
            ));
        }
        for (field, len) in [
            ("mu", self.drifts.len()),
            ("D", self.cum_dividends.len()),
            ("sigma rows", self.dispersion.n_rows()),
        ] {
            if len != n {
                return Err(MarketError::shape(Location::field(field), n, len));
            }
        }
        for (field, values) in [("S", &self.prices), ("mu", &self.drifts), ("D", &self.cum_dividends)] {
            if let Some(i) = values.iter().position(|v| !v.is_finite()) {
                return Err(MarketError::invariant(
                    Location::field(format!("{field}[{i}]")),
                    "entry is not finite",
                ));
            }
        }
        for (field, v) in [("r", self.short_rate), ("M", self.deflator)] {
            if !v.is_finite() {
                return Err(MarketError::invariant(Location::field(field), "not finite"));
            }
        }
        if self.deflator <= 0.0 {
            return Err(MarketError::invariant(
                Location::field("M"),
                format!("deflator must be positive, got {}", self.deflator),
            ));
        }
        let mm = money_market_index;
        if mm >= n {
            return Err(MarketError::invariant(
                Location::field("money_market_index"),
                format!("index {mm} out of range for {n} securities"),
            ));
        }
        if self.dispersion.row(mm).iter().any(|v| *v != 0.0) {
            return Err(MarketError::invariant(
                Location::field(format!("sigma[{mm}]")),
                "money-market dispersion row must be zero",
            ));
        }
        if !nearly_equal(self.prices[mm], self.deflator) {
            return Err(MarketError::invariant(
                Location::field(format!("S[{mm}]")),
                format!(
                    "money-market price {} differs from deflator {}",
                    self.prices[mm], self.deflator
                ),
            ));
        }
        if !nearly_equal(self.drifts[mm], self.short_rate * self.prices[mm]) {
            return Err(MarketError::invariant(
                Location::field(format!("mu[{mm}]")),
                "money-market drift must equal r times its price",
            ));
        }
        if self.cum_dividends[mm] != 0.0 {
            return Err(MarketError::invariant(
                Location::field(format!("D[{mm}]")),
                "money market pays no dividends",
            ));
        }
        Ok(())
    }

    /// `μ − r·S`.
    pub fn excess_drift(&self) -> Vec<f64> {
        excess_drift(self)
    }
}

/// Instantaneous excess expected dollar returns `μ − r·S` of unit holdings.
pub fn excess_drift(sample: &MarketSample) -> Vec<f64> {
    sample
        .drifts
        .iter()
        .zip(&sample.prices)
        .map(|(mu, s)| mu - sample.short_rate * s)
        .collect()
}

/// Drift and dispersion of the gains process in money-market units:
/// `((μ − r·S) / M, σ / M)`.
pub fn deflate_sample(sample: &MarketSample) -> (Vec<f64>, RealMatrix) {
    let m = sample.deflator;
    let drift = excess_drift(sample).into_iter().map(|e| e / m).collect();
    (drift, sample.dispersion.scale(1.0 / m))
}
