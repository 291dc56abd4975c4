//! Tolerance-aware linear algebra used by every verdict in the crate.
//!
//! The operators here are deterministic selectors: for a fixed input and
//! fixed [`ToleranceConfig`] they always pick the same pivots, the same
//! orthonormal basis and the same particular solution. That is what lets a
//! whole grid of samples be evaluated independently (and in parallel) while
//! the assembled processes stay reproducible.
//!
//! * [`greedy_pivot_rows`] scans rows in index order and keeps each row that
//!   is independent of the rows kept before it.
//! * [`gram_schmidt_rows`] orthonormalizes a full-row-rank matrix and returns
//!   the lower-triangular coefficient matrix `G` with `Q = G·W`.
//! * [`orthonormal_row_projector`] chains the two into `J = G·H`.
//! * [`solve_row_system`], [`solve_column_system`] and [`dual_certificate`]
//!   are built on top of `J`.

mod matrix;
mod ortho;
mod selectors;
mod tolerance;

pub use matrix::{axpy, dot, max_abs, norm, sub, RealMatrix};
pub use ortho::{gram_schmidt_rows, greedy_pivot_rows, orthonormal_row_projector, RankFactorization};
pub use selectors::{
    dual_certificate, row_span_membership, select_row_solution, solve_column_system,
    solve_row_system, SpanMembership,
};
pub use tolerance::ToleranceConfig;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("row {index} is numerically dependent on earlier rows (residual {residual:e})")]
    DegenerateRow { index: usize, residual: f64 },
    #[error("vector is not in the span (residual {residual:e})")]
    NotInSpan { residual: f64 },
    #[error("vector lies in the column span, no certificate exists (residual {residual:e})")]
    NoCertificate { residual: f64 },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
}
