//! Instantaneous arbitrage analysis for discretized Itô securities markets.
//!
//! Every sample of a market grid carries prices `S`, drifts `μ`, a dispersion
//! matrix `σ`, a short rate `r` and a money-market value `M`. The excess drift
//! `e = μ − r·S` either lies in the column span of `σ`, in which case the
//! sample admits a price of risk and a CAPM-satisfying strategy, or it does
//! not, in which case a zero-value riskless strategy with positive expected
//! return exists. This crate decides which, sample by sample, and builds the
//! witness in both cases.
//!
//! Modules:
//!
//! * [`kernel`]: deterministic pivoting, Gram–Schmidt, span selectors and
//!   dual certificates.
//! * [`market`]: market samples and grids, deflation, gains/dividend ledgers,
//!   self-financing completion and path simulation.
//! * [`engine`]: per-sample classification, prices of risk, betas, CAPM
//!   strategies, arbitrage certificates and interest-rate consistency.
//! * [`scenario`]: seeded test markets with planted prices of risk and
//!   injected arbitrage, plus model-file ingestion.
//! * [`cli`]: the `riskgate` command line.

pub mod cli;
pub mod engine;
pub mod grid;
pub mod kernel;
pub mod market;
pub mod scenario;

pub use grid::{Grid, SampleIndex};
pub use kernel::{RealMatrix, ToleranceConfig};
