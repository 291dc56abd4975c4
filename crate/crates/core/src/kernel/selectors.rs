//! Span membership, particular-solution selectors and dual certificates.

use super::matrix::{dot, norm};
use super::{orthonormal_row_projector, KernelError, RankFactorization, RealMatrix, ToleranceConfig};

/// Result of testing whether a row vector lies in a row span.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanMembership {
    pub member: bool,
    /// `‖y − (y·Qᵀ)·Q‖`
    pub residual: f64,
}

impl RankFactorization {
    /// Membership of `y` in the row span this factorization describes.
    pub fn membership(&self, y: &[f64], tol: &ToleranceConfig) -> SpanMembership {
        let residual = norm(&self.orthogonal_residual(y));
        SpanMembership {
            member: tol.is_negligible(residual, norm(y)),
            residual,
        }
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), KernelError> {
    if expected != found {
        return Err(KernelError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Tests whether the row vector `y` (length `K`) is a combination of the rows
/// of `v` (`M × K`).
pub fn row_span_membership(
    y: &[f64],
    v: &RealMatrix,
    tol: &ToleranceConfig,
) -> Result<SpanMembership, KernelError> {
    check_len(v.n_cols(), y.len())?;
    Ok(orthonormal_row_projector(v, tol).membership(y, tol))
}

/// The selector `x = y·Vᵀ·Jᵀ·J` evaluated without a membership check.
///
/// `y·Vᵀ·Jᵀ` equals `y·Qᵀ` because `Q = J·V`; the orthonormal form is used
/// since it does not amplify rounding by the conditioning of `G`. Entries
/// outside the pivot rows are exactly zero.
pub fn select_row_solution(y: &[f64], factorization: &RankFactorization) -> Vec<f64> {
    let coords = factorization.coordinates(y);
    let g = factorization.orthonormalizer();
    let mut x = vec![0.0; factorization.n_source_rows()];
    for (c, &p) in factorization.pivot_rows().iter().enumerate() {
        // G is lower triangular: only rows i ≥ c contribute to column c.
        x[p] = (c..factorization.rank())
            .map(|i| coords[i] * g.get(i, c))
            .sum();
    }
    x
}

/// Finds a row vector `x` (length `M`) with `x·V = y`.
///
/// Fails with [`KernelError::NotInSpan`] if `y` is not in the row span of
/// `V` at `residual_tol`.
pub fn solve_row_system(
    y: &[f64],
    v: &RealMatrix,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>, KernelError> {
    check_len(v.n_cols(), y.len())?;
    let f = orthonormal_row_projector(v, tol);
    let m = f.membership(y, tol);
    if !m.member {
        return Err(KernelError::NotInSpan {
            residual: m.residual,
        });
    }
    Ok(select_row_solution(y, &f))
}

/// Finds a column vector `x` (length `K`) with `V·x = y`, by transposition
/// of [`solve_row_system`].
pub fn solve_column_system(
    y: &[f64],
    v: &RealMatrix,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>, KernelError> {
    check_len(v.n_rows(), y.len())?;
    solve_row_system(y, &v.transpose(), tol)
}

/// A row vector `Z` with `Z·Y = 1` and `Z·Σ = 0`, proving that `V·x = Y`
/// has no solution.
///
/// The certificate is the pivot-supported solution of
/// `Z·(Y | Σ) = (1, 0, …, 0)`. If `Y` is in the column span of `Σ`
/// the result is [`KernelError::NoCertificate`]. When the augmented system
/// is numerically inconclusive (a knife-edge `Y` just outside the span) the
/// projection certificate `Z = ρᵀ / (ρ·Y)` is returned instead, where `ρ`
/// is the residual of `Y` against the column span.
pub fn dual_certificate(
    y: &[f64],
    sigma: &RealMatrix,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>, KernelError> {
    check_len(sigma.n_rows(), y.len())?;
    let columns = orthonormal_row_projector(&sigma.transpose(), tol);
    let membership = columns.membership(y, tol);
    if membership.member {
        return Err(KernelError::NoCertificate {
            residual: membership.residual,
        });
    }

    let augmented = sigma.prepend_column(y)?;
    let mut target = vec![0.0; augmented.n_cols()];
    target[0] = 1.0;
    let f = orthonormal_row_projector(&augmented, tol);
    if f.membership(&target, tol).member {
        let z = select_row_solution(&target, &f);
        if certificate_holds(&z, y, sigma, tol) {
            return Ok(z);
        }
    }

    let rho = columns.orthogonal_residual(y);
    let denom = dot(&rho, y);
    Ok(rho.iter().map(|v| v / denom).collect())
}

fn certificate_holds(z: &[f64], y: &[f64], sigma: &RealMatrix, tol: &ToleranceConfig) -> bool {
    let zs = sigma.row_mul(z).expect("length checked");
    (dot(z, y) - 1.0).abs() <= tol.residual_tol
        && norm(&zs) <= tol.residual_tol * (1.0 + sigma.frobenius_norm())
}
