use serde::{Deserialize, Serialize};

use super::KernelError;

/// Numerical thresholds for independence and span-membership decisions.
///
/// Both are relative: a residual `res` of a vector `v` counts as zero when
/// `res ≤ tol · (1 + ‖v‖)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_tol: f64,
    pub residual_tol: f64,
}

impl ToleranceConfig {
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(rank_tol: f64, residual_tol: f64) -> Result<Self, KernelError> {
        for (name, v) in [("rank_tol", rank_tol), ("residual_tol", residual_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(KernelError::InvalidTolerance(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(Self {
            rank_tol,
            residual_tol,
        })
    }

    /// Whether `residual` is small relative to a vector of norm `scale`.
    #[inline]
    pub fn is_negligible(&self, residual: f64, scale: f64) -> bool {
        residual <= self.residual_tol * (1.0 + scale)
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_tol: Self::DEFAULT_TOL,
            residual_tol: Self::DEFAULT_TOL,
        }
    }
}
