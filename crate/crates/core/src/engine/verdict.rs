use rayon::prelude::*;

use crate::grid::Grid;
use crate::kernel::{
    dot, dual_certificate, norm, orthonormal_row_projector, select_row_solution, sub,
    ToleranceConfig,
};
use crate::market::{MarketModel, MarketSample};

use super::EngineError;

/// Violated samples whose membership residual is within this factor of the
/// threshold are reported as marginal.
pub const MARGINAL_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    /// `e` lies in the column span of `σ`.
    Free {
        /// `ψ` with `σσᵀψᵀ = e`.
        psi: Vec<f64>,
        /// `λ* = ψσ`.
        lambda_star: Vec<f64>,
    },
    /// `e` is outside the column span of `σ`.
    Violated {
        /// `Z` with `Z·e = 1`, `Z·σ = 0`.
        certificate_z: Vec<f64>,
        /// `Θ = Z − (Z·S / M)·b̄`: zero value, zero dispersion.
        theta: Vec<f64>,
        /// `Θ·(μ − rS)`, one up to rounding.
        excess_margin: f64,
        /// Residual within [`MARGINAL_FACTOR`] of the threshold.
        marginal: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleVerdict {
    /// Distance of `e` from the column span of `σ`.
    pub membership_residual: f64,
    pub outcome: Outcome,
}

impl SampleVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self.outcome, Outcome::Free { .. })
    }

    pub fn psi(&self) -> Option<&[f64]> {
        match &self.outcome {
            Outcome::Free { psi, .. } => Some(psi),
            Outcome::Violated { .. } => None,
        }
    }

    pub fn lambda_star(&self) -> Option<&[f64]> {
        match &self.outcome {
            Outcome::Free { lambda_star, .. } => Some(lambda_star),
            Outcome::Violated { .. } => None,
        }
    }

    pub fn theta(&self) -> Option<&[f64]> {
        match &self.outcome {
            Outcome::Violated { theta, .. } => Some(theta),
            Outcome::Free { .. } => None,
        }
    }

    pub fn certificate(&self) -> Option<&[f64]> {
        match &self.outcome {
            Outcome::Violated { certificate_z, .. } => Some(certificate_z),
            Outcome::Free { .. } => None,
        }
    }

    pub fn is_marginal(&self) -> bool {
        matches!(self.outcome, Outcome::Violated { marginal: true, .. })
    }
}

/// Decides whether one sample admits a price of risk and builds the witness.
///
/// Everything is computed from factorizations of `σ`, never of `σσᵀ`, so
/// rank decisions and rounding see the conditioning of `σ` rather than its
/// square. A pivot-supported solution of `σxᵀ = e` is projected onto the
/// row span of `σ` to give `λ*`, and `ψ` is the pivot-supported solution of
/// `ψσ = λ*`. This is the same `ψ` as the one solving `σσᵀψᵀ = e` on the
/// pivot rows: both systems select the same rows of `σ`.
pub fn classify_sample(
    sample: &MarketSample,
    money_market_index: usize,
    tol: &ToleranceConfig,
) -> SampleVerdict {
    let e = sample.excess_drift();
    let sigma = &sample.dispersion;
    let columns = orthonormal_row_projector(&sigma.transpose(), tol);
    let membership = columns.membership(&e, tol);

    if membership.member {
        let x = select_row_solution(&e, &columns);
        let rows = orthonormal_row_projector(sigma, tol);
        let lambda_star = sub(&x, &rows.orthogonal_residual(&x));
        let psi = select_row_solution(&lambda_star, &rows);
        return SampleVerdict {
            membership_residual: membership.residual,
            outcome: Outcome::Free { psi, lambda_star },
        };
    }

    let z = dual_certificate(&e, sigma, tol).expect("e is outside the column span");
    let mm_price = sample.prices[money_market_index];
    let scale = dot(&z, &sample.prices) / mm_price;
    let mut theta = z.clone();
    theta[money_market_index] -= scale;
    let excess_margin = dot(&theta, &e);
    let threshold = tol.residual_tol * (1.0 + norm(&e));
    SampleVerdict {
        membership_residual: membership.residual,
        outcome: Outcome::Violated {
            certificate_z: z,
            theta,
            excess_margin,
            marginal: membership.residual <= MARGINAL_FACTOR * threshold,
        },
    }
}

/// Classifies every sample of a model. Runs on the current rayon pool;
/// results are in grid order regardless of scheduling.
pub fn classify_grid(model: &MarketModel, tol: &ToleranceConfig) -> Grid<SampleVerdict> {
    let mm = model.money_market_index();
    let cells: Vec<SampleVerdict> = model
        .samples()
        .cells()
        .par_iter()
        .map(|s| classify_sample(s, mm, tol))
        .collect();
    Grid::from_cells(model.n_paths(), model.n_times(), cells).expect("one verdict per sample")
}

/// `‖σλᵀ − (μ − rS)‖ ≤ tol · (1 + ‖μ − rS‖)`.
pub fn price_of_risk_check(
    lambda: &[f64],
    sample: &MarketSample,
    tol: &ToleranceConfig,
) -> Result<bool, EngineError> {
    Ok(price_of_risk_residual(lambda, sample)?.0 <= tol.residual_tol * (1.0 + norm(&sample.excess_drift())))
}

fn price_of_risk_residual(lambda: &[f64], sample: &MarketSample) -> Result<(f64, f64), EngineError> {
    if lambda.len() != sample.n_factors() {
        return Err(EngineError::DimensionMismatch {
            expected: sample.n_factors(),
            found: lambda.len(),
        });
    }
    let e = sample.excess_drift();
    let implied = sample.dispersion.mul_col(lambda)?;
    Ok((norm(&sub(&implied, &e)), norm(&e)))
}

/// `λλᵀ − λ*λ*ᵀ` for a valid price of risk `λ`; never below `−tol` when
/// `λ*` is minimal.
pub fn minimality_gap(
    lambda: &[f64],
    verdict: &SampleVerdict,
    sample: &MarketSample,
    tol: &ToleranceConfig,
) -> Result<f64, EngineError> {
    let lambda_star = verdict.lambda_star().ok_or(EngineError::NotFree)?;
    let (residual, e_norm) = price_of_risk_residual(lambda, sample)?;
    if residual > tol.residual_tol * (1.0 + e_norm) {
        return Err(EngineError::InvalidLambda { residual });
    }
    Ok(dot(lambda, lambda) - dot(lambda_star, lambda_star))
}
