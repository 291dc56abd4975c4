//! Seeded synthesis of test markets with known ground truth.
//!
//! [`generate`] plants a price of risk `λ` at every sample and sets
//! `μ = r·S + σλᵀ`, so the result is arbitrage-free by construction.
//! [`inject_arbitrage`] then pushes the excess drift off the column span of
//! `σ` at chosen samples. The [`GenerationCertificate`] records both.

mod generate;
mod ingest;
mod spec;

pub use generate::{generate, inject_arbitrage, simulate_scenario, GenerationCertificate};
pub use ingest::{ingest, ingest_str, read_certificate, write_certificate, write_model};
pub use spec::{Injection, RankProfile, ScenarioSpec};

use thiserror::Error;

use crate::grid::SampleIndex;
use crate::market::{Location, MarketError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    InvalidSpec(String),
    #[error("cannot inject at {0}: dispersion already spans every risky direction")]
    SpanIsFull(SampleIndex),
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    ParseError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {location}: {message}")]
    SchemaError { location: String, message: String },
    #[error("invariant violated at {location}: {reason}")]
    InvariantError { location: Location, reason: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Market(MarketError),
}

impl From<MarketError> for ScenarioError {
    fn from(err: MarketError) -> Self {
        match err {
            MarketError::ShapeMismatch {
                location,
                expected,
                found,
            } => Self::SchemaError {
                location: location.to_string(),
                message: format!("expected length {expected}, found {found}"),
            },
            MarketError::Invariant { location, reason } => Self::InvariantError { location, reason },
            other => Self::Market(other),
        }
    }
}
