//! Pivot selection, Gram–Schmidt orthonormalization and the combined
//! projector `J = G·H`.

use super::matrix::{axpy, dot, norm};
use super::{KernelError, RealMatrix, ToleranceConfig};

/// Outcome of offering one row to an [`Orthonormalizer`].
enum Offer {
    Accepted { coeffs: Vec<f64>, scale: f64 },
    Rejected { residual: f64 },
}

/// Incremental classical Gram–Schmidt over rows.
///
/// Each candidate is projected onto the rows accepted so far. A second
/// projection pass runs when the residual has shrunk below
/// `√rank_tol · ‖row‖`; its coefficients are folded into the first pass so
/// that `row = Σ t_k θ_k + x` still holds for the returned `t`.
struct Orthonormalizer<'a> {
    tol: &'a ToleranceConfig,
    basis: Vec<Vec<f64>>,
}

impl<'a> Orthonormalizer<'a> {
    fn new(tol: &'a ToleranceConfig) -> Self {
        Self {
            tol,
            basis: Vec::new(),
        }
    }

    fn project_out(&self, residual: &mut [f64], coeffs: &mut [f64]) {
        let t: Vec<f64> = self
            .basis
            .iter()
            .map(|theta| dot(residual, theta) / dot(theta, theta))
            .collect();
        for ((theta, tk), ck) in self.basis.iter().zip(&t).zip(coeffs.iter_mut()) {
            axpy(-tk, theta, residual);
            *ck += tk;
        }
    }

    fn offer(&mut self, row: &[f64]) -> Offer {
        let row_norm = norm(row);
        let mut x = row.to_vec();
        let mut coeffs = vec![0.0; self.basis.len()];
        self.project_out(&mut x, &mut coeffs);
        let mut x_norm = norm(&x);
        if !self.basis.is_empty() && x_norm < self.tol.rank_tol.sqrt() * row_norm {
            self.project_out(&mut x, &mut coeffs);
            x_norm = norm(&x);
        }
        if x_norm <= self.tol.rank_tol * (1.0 + row_norm) {
            return Offer::Rejected { residual: x_norm };
        }
        x.iter_mut().for_each(|v| *v /= x_norm);
        self.basis.push(x);
        Offer::Accepted {
            coeffs,
            scale: x_norm,
        }
    }
}

/// Lexicographically first maximal set of independent rows.
///
/// Rows are scanned in index order; a row is kept iff its residual after
/// projection onto the rows kept so far exceeds `rank_tol · (1 + ‖row‖)`.
/// Returns `(rank, pivots)` with `pivots` strictly increasing.
pub fn greedy_pivot_rows(v: &RealMatrix, tol: &ToleranceConfig) -> (usize, Vec<usize>) {
    let mut ortho = Orthonormalizer::new(tol);
    let mut pivots = Vec::new();
    for (i, row) in v.rows().enumerate() {
        if ortho.basis.len() == v.n_cols() {
            break;
        }
        if let Offer::Accepted { .. } = ortho.offer(row) {
            pivots.push(i);
        }
    }
    (pivots.len(), pivots)
}

/// Orthonormalizes the rows of a full-row-rank `r × K` matrix `W`.
///
/// Returns `(G, Q)` with `G` lower triangular, positive diagonal, and
/// `Q = G·W` having orthonormal rows. Row `n` of `G` is
/// `(e_n − Σ_{j<n} t_{n,j} G_j) / ‖x_n‖`.
pub fn gram_schmidt_rows(
    w: &RealMatrix,
    tol: &ToleranceConfig,
) -> Result<(RealMatrix, RealMatrix), KernelError> {
    let r = w.n_rows();
    let mut ortho = Orthonormalizer::new(tol);
    let mut g = RealMatrix::zeros(r, r);
    for (n, row) in w.rows().enumerate() {
        match ortho.offer(row) {
            Offer::Rejected { residual } => {
                return Err(KernelError::DegenerateRow { index: n, residual })
            }
            Offer::Accepted { coeffs, scale } => {
                let mut g_row = vec![0.0; r];
                g_row[n] = 1.0;
                for (j, t) in coeffs.iter().enumerate() {
                    let prev = g.row(j).to_vec();
                    axpy(-t, &prev, &mut g_row);
                }
                g_row.iter_mut().for_each(|v| *v /= scale);
                g.row_mut(n).copy_from_slice(&g_row);
            }
        }
    }
    let mut q = RealMatrix::zeros(r, w.n_cols());
    for (i, theta) in ortho.basis.iter().enumerate() {
        q.row_mut(i).copy_from_slice(theta);
    }
    Ok((g, q))
}

/// Rank-revealing factorization of a matrix `V` (`M × K`).
///
/// `J = G·H` is `r × M`, supported on the pivot columns, and `Q = J·V` has
/// orthonormal rows spanning the row space of `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankFactorization {
    rank: usize,
    n_source_rows: usize,
    pivot_rows: Vec<usize>,
    orthonormalizer: RealMatrix,
    projector: RealMatrix,
    basis: RealMatrix,
}

impl RankFactorization {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// `G`, `r × r`.
    pub fn orthonormalizer(&self) -> &RealMatrix {
        &self.orthonormalizer
    }

    /// `J = G·H`, `r × M`.
    pub fn projector(&self) -> &RealMatrix {
        &self.projector
    }

    /// `Q`, `r × K`, orthonormal rows.
    pub fn basis(&self) -> &RealMatrix {
        &self.basis
    }

    /// Number of rows `M` of the factorized matrix.
    pub fn n_source_rows(&self) -> usize {
        self.n_source_rows
    }

    /// Coordinates `y·Qᵀ` of a row vector in the orthonormal basis.
    pub fn coordinates(&self, y: &[f64]) -> Vec<f64> {
        self.basis.rows().map(|q| dot(y, q)).collect()
    }

    /// `y − (y·Qᵀ)·Q`, the component of `y` orthogonal to the row space.
    pub fn orthogonal_residual(&self, y: &[f64]) -> Vec<f64> {
        let coords = self.coordinates(y);
        let mut res = y.to_vec();
        for (c, q) in coords.iter().zip(self.basis.rows()) {
            axpy(-c, q, &mut res);
        }
        res
    }
}

/// Builds `H` from [`greedy_pivot_rows`], `G` from [`gram_schmidt_rows`] on
/// the selected rows and returns the combined projector.
pub fn orthonormal_row_projector(v: &RealMatrix, tol: &ToleranceConfig) -> RankFactorization {
    let (rank, pivots) = greedy_pivot_rows(v, tol);
    let selected: Vec<&[f64]> = pivots.iter().map(|&i| v.row(i)).collect();
    let w = if selected.is_empty() {
        RealMatrix::zeros(0, v.n_cols())
    } else {
        RealMatrix::from_rows(&selected).expect("rows of a validated matrix")
    };
    // Same rows in the same order as the greedy scan, so acceptance repeats.
    let (g, q) = gram_schmidt_rows(&w, tol).expect("pivot rows are independent");
    let mut j = RealMatrix::zeros(rank, v.n_rows());
    for i in 0..rank {
        for (c, &p) in pivots.iter().enumerate() {
            j.set(i, p, g.get(i, c));
        }
    }
    RankFactorization {
        rank,
        n_source_rows: v.n_rows(),
        pivot_rows: pivots,
        orthonormalizer: g,
        projector: j,
        basis: q,
    }
}
