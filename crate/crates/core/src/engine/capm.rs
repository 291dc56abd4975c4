use crate::grid::Grid;
use crate::kernel::{dot, norm, ToleranceConfig};
use crate::market::{MarketModel, MarketSample, TradingStrategy};

use super::certificate::riskless_holding;
use super::{classify_grid, EngineError};

/// The strategy `ψ` whose betas price every security, with the resulting
/// `λ*` and the size of the pricing residual at each sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CapmStrategy {
    pub holdings: TradingStrategy,
    pub lambda_star: Grid<Vec<f64>>,
    /// `‖e − b_ψ·(ψ·e)‖` per sample.
    pub residuals: Grid<f64>,
    pub max_residual: f64,
}

fn check_holding(delta: &[f64], sample: &MarketSample) -> Result<(), EngineError> {
    if delta.len() != sample.n_securities() {
        return Err(EngineError::DimensionMismatch {
            expected: sample.n_securities(),
            found: delta.len(),
        });
    }
    Ok(())
}

/// `b_Δ = σσᵀΔᵀ / (Δσσᵀ Δᵀ)`, or zero when `Δ` is riskless at this sample.
pub fn fundamental_betas(
    delta: &[f64],
    sample: &MarketSample,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>, EngineError> {
    check_holding(delta, sample)?;
    let sigma = &sample.dispersion;
    let exposure = sigma.row_mul(delta)?;
    if riskless_holding(delta, &exposure, sigma, tol) {
        return Ok(vec![0.0; delta.len()]);
    }
    let variance = dot(&exposure, &exposure);
    let covariance = sigma.mul_col(&exposure)?;
    Ok(covariance.into_iter().map(|c| c / variance).collect())
}

/// `(μ − rS) − b_Δ · Δ(μ − rS)`.
pub fn capm_residual(
    delta: &[f64],
    sample: &MarketSample,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>, EngineError> {
    let betas = fundamental_betas(delta, sample, tol)?;
    let e = sample.excess_drift();
    let premium = dot(delta, &e);
    Ok(e.iter().zip(&betas).map(|(ei, bi)| ei - bi * premium).collect())
}

/// Whether the betas of `Δ` price all securities at this sample.
pub fn capm_satisfied(
    delta: &[f64],
    sample: &MarketSample,
    tol: &ToleranceConfig,
) -> Result<bool, EngineError> {
    let residual = norm(&capm_residual(delta, sample, tol)?);
    Ok(residual <= tol.residual_tol * (1.0 + norm(&sample.excess_drift())))
}

/// Builds `ψ` at every sample of an arbitrage-free model.
pub fn capm_strategy(model: &MarketModel, tol: &ToleranceConfig) -> Result<CapmStrategy, EngineError> {
    let verdicts = classify_grid(model, tol);
    let violated: Vec<_> = verdicts
        .iter()
        .filter(|(_, v)| !v.is_free())
        .map(|(idx, _)| idx)
        .collect();
    if !violated.is_empty() {
        return Err(EngineError::ArbitragePresent { violated });
    }
    let holdings = TradingStrategy::new(verdicts.map(|_, v| v.psi().expect("free").to_vec()))?;
    let lambda_star = verdicts.map(|_, v| v.lambda_star().expect("free").to_vec());
    let mut residuals = Vec::with_capacity(verdicts.len());
    for (idx, v) in verdicts.iter() {
        let r = capm_residual(v.psi().expect("free"), model.sample(idx), tol)?;
        residuals.push(norm(&r));
    }
    let max_residual = residuals.iter().fold(0.0_f64, |m, r| m.max(*r));
    let residuals = Grid::from_cells(model.n_paths(), model.n_times(), residuals).expect("one per sample");
    Ok(CapmStrategy {
        holdings,
        lambda_star,
        residuals,
        max_residual,
    })
}

/// `b_{cΔ} = b_Δ / c` up to tolerance.
pub fn scaling_invariance_check(
    delta: &[f64],
    c: f64,
    sample: &MarketSample,
    tol: &ToleranceConfig,
) -> Result<bool, EngineError> {
    if c == 0.0 {
        return Err(EngineError::ZeroScale);
    }
    let scaled: Vec<f64> = delta.iter().map(|d| c * d).collect();
    let expected: Vec<f64> = fundamental_betas(delta, sample, tol)?.iter().map(|b| b / c).collect();
    let got = fundamental_betas(&scaled, sample, tol)?;
    let gap = norm(&crate::kernel::sub(&got, &expected));
    Ok(gap <= tol.residual_tol * (1.0 + norm(&expected)))
}
