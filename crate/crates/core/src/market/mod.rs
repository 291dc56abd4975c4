//! Discretized securities market models.
//!
//! A [`MarketModel`] is a grid of [`MarketSample`]s over paths and a common
//! time grid. One security is designated as the money market: its dispersion
//! row is zero, its drift is `r·S`, it pays no dividends and its price is the
//! deflator `M`. Integrals along a path use the left-point rule.

mod deflate;
pub mod io;
mod ledger;
mod model;
mod sample;
mod simulate;
mod strategy;

pub use deflate::{deflate_dividends, money_market_path};
pub use ledger::{self_financing_check, self_financing_completion, strategy_ledger, StrategyLedger};
pub use model::{MarketModel, ModelParts};
pub use sample::{deflate_sample, excess_drift, MarketSample};
pub use simulate::{
    simulate_paths, CoefficientModel, ConstantCoefficients, ProportionalCoefficients,
    SimulationTemplate,
};
pub use strategy::TradingStrategy;

use std::fmt;

use thiserror::Error;

use crate::grid::SampleIndex;

/// Relative slack for the money-market sample invariants and the deflator
/// recursion. These are identities by construction, so only representation
/// error is tolerated.
pub const INVARIANT_TOL: f64 = 1e-10;

/// Where in a model an error was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub index: Option<SampleIndex>,
    pub field: String,
}

impl Location {
    pub fn field(field: impl Into<String>) -> Self {
        Self {
            index: None,
            field: field.into(),
        }
    }

    pub fn sample(index: SampleIndex, field: impl Into<String>) -> Self {
        Self {
            index: Some(index),
            field: field.into(),
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "path {}, t_index {}, field `{}`", i.path, i.t_index, self.field),
            None => write!(f, "field `{}`", self.field),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarketError {
    #[error("{location}: expected length {expected}, found {found}")]
    ShapeMismatch {
        location: Location,
        expected: usize,
        found: usize,
    },
    #[error("{location}: {reason}")]
    Invariant { location: Location, reason: String },
    #[error("initial money-market value must be positive, got {0}")]
    NonpositiveInitialValue(f64),
    #[error("model has no realized paths (no Wiener increments)")]
    MissingIncrements,
    #[error("invalid simulation template: {0}")]
    InvalidTemplate(String),
}

impl MarketError {
    pub(crate) fn shape(location: Location, expected: usize, found: usize) -> Self {
        Self::ShapeMismatch {
            location,
            expected,
            found,
        }
    }

    pub(crate) fn invariant(location: Location, reason: impl Into<String>) -> Self {
        Self::Invariant {
            location,
            reason: reason.into(),
        }
    }

    /// Attaches a sample index to an error raised without one.
    pub(crate) fn at(mut self, index: SampleIndex) -> Self {
        match &mut self {
            Self::ShapeMismatch { location, .. } | Self::Invariant { location, .. } => {
                location.index.get_or_insert(index);
            }
            _ => {}
        }
        self
    }

    pub fn location(&self) -> Option<&Location> {
        match self {
            Self::ShapeMismatch { location, .. } | Self::Invariant { location, .. } => {
                Some(location)
            }
            _ => None,
        }
    }
}

/// `|a − b| ≤ INVARIANT_TOL · (1 + max(|a|, |b|))`
pub(crate) fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= INVARIANT_TOL * (1.0 + a.abs().max(b.abs()))
}
