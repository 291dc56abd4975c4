//! Per-sample arbitrage classification and the witnesses built from it.
//!
//! At each sample the excess drift `e = μ − r·S` is tested against the
//! column span of `σ`. Inside the span the sample is [`Outcome::Free`]: a
//! strategy `ψ` with `σσᵀψᵀ = e` exists and `λ* = ψσ` is the shortest price
//! of risk. Outside it the sample is [`Outcome::Violated`]: a dual
//! certificate `Z` (`Z·e = 1`, `Z·σ = 0`) is turned into a zero-value riskless
//! strategy `Θ` earning one unit of expected excess return.

mod capm;
mod certificate;
mod rates;
mod report;
mod verdict;

pub use capm::{
    capm_residual, capm_satisfied, capm_strategy, fundamental_betas, scaling_invariance_check,
    CapmStrategy,
};
pub use certificate::{arbitrage_set, is_riskless, zero_value_certificate};
pub use rates::{rate_consistency, MoneyMarketAccount, RateConsistency};
pub use report::{analyze, AnalysisReport, RateComparison, VerdictRecord};
pub use verdict::{
    classify_grid, classify_sample, minimality_gap, price_of_risk_check, Outcome, SampleVerdict,
    MARGINAL_FACTOR,
};

use thiserror::Error;

use crate::grid::SampleIndex;
use crate::kernel::KernelError;
use crate::market::MarketError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("lambda is not a price of risk at this sample (residual {residual:e})")]
    InvalidLambda { residual: f64 },
    #[error("sample is not arbitrage-free; no minimal price of risk exists")]
    NotFree,
    #[error("instantaneous arbitrage at {} sample(s)", violated.len())]
    ArbitragePresent { violated: Vec<SampleIndex> },
    #[error("strategy is not instantaneously riskless at {0}")]
    NotRiskless(SampleIndex),
    #[error("strategy has no positive excess return at {0}")]
    NoPositiveExcess(SampleIndex),
    #[error("not a money market account: {0}")]
    NotAMoneyMarketAccount(String),
    #[error("{0} is outside the model grid")]
    OutsideGrid(SampleIndex),
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}
