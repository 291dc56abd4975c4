//! Dense row-major real matrices and the handful of vector helpers the
//! kernel needs.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::KernelError;

/// Finite dense real matrix stored row-major.
///
/// Zero-sized shapes are allowed so that a rank-0 factorization can carry an
/// empty `0 × M` projector; user-facing constructors reject non-finite data.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    n_rows: usize,
    n_cols: usize,
    entries: Vec<f64>,
}

impl RealMatrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(n_rows: usize, n_cols: usize, entries: Vec<f64>) -> Result<Self, KernelError> {
        if entries.len() != n_rows * n_cols {
            return Err(KernelError::DimensionMismatch {
                expected: n_rows * n_cols,
                found: entries.len(),
            });
        }
        if let Some(pos) = entries.iter().position(|v| !v.is_finite()) {
            return Err(KernelError::NonFinite {
                row: pos / n_cols.max(1),
                col: pos % n_cols.max(1),
            });
        }
        Ok(Self {
            n_rows,
            n_cols,
            entries,
        })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, KernelError> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * n_cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(KernelError::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(rows.len(), n_cols, entries)
    }

    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            entries: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1.0;
        }
        m
    }

    /// Single-row matrix.
    pub fn row_vector(values: &[f64]) -> Result<Self, KernelError> {
        Self::new(1, values.len(), values.to_vec())
    }

    /// Single-column matrix.
    pub fn column_vector(values: &[f64]) -> Result<Self, KernelError> {
        Self::new(values.len(), 1, values.to_vec())
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n_cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.entries[row * self.n_cols + col] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n_cols..(i + 1) * self.n_cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.entries[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n_rows).map(|i| self.get(i, j)).collect()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<f64> {
        self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n_cols, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                t.entries[j * self.n_rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &RealMatrix) -> Result<Self, KernelError> {
        if self.n_cols != rhs.n_rows {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_cols,
                found: rhs.n_rows,
            });
        }
        let mut out = Self::zeros(self.n_rows, rhs.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.n_cols {
                    out.entries[i * rhs.n_cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `self · selfᵀ`.
    pub fn gram_rows(&self) -> Self {
        let mut out = Self::zeros(self.n_rows, self.n_rows);
        for i in 0..self.n_rows {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                out.entries[i * self.n_rows + j] = v;
                out.entries[j * self.n_rows + i] = v;
            }
        }
        out
    }

    /// Matrix times column vector, `self · x`.
    pub fn mul_col(&self, x: &[f64]) -> Result<Vec<f64>, KernelError> {
        if x.len() != self.n_cols {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_cols,
                found: x.len(),
            });
        }
        Ok(self.rows().map(|row| dot(row, x)).collect())
    }

    /// Row vector times matrix, `x · self`.
    pub fn row_mul(&self, x: &[f64]) -> Result<Vec<f64>, KernelError> {
        if x.len() != self.n_rows {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_rows,
                found: x.len(),
            });
        }
        let mut out = vec![0.0; self.n_cols];
        for (xi, row) in x.iter().zip(self.rows()) {
            axpy(*xi, row, &mut out);
        }
        Ok(out)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.entries)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    /// Appends `column` on the left: `(column | self)`.
    pub fn prepend_column(&self, column: &[f64]) -> Result<Self, KernelError> {
        if column.len() != self.n_rows {
            return Err(KernelError::DimensionMismatch {
                expected: self.n_rows,
                found: column.len(),
            });
        }
        let n_cols = self.n_cols + 1;
        let mut entries = Vec::with_capacity(self.n_rows * n_cols);
        for (c, row) in column.iter().zip(self.rows()) {
            entries.push(*c);
            entries.extend_from_slice(row);
        }
        Ok(Self {
            n_rows: self.n_rows,
            n_cols,
            entries,
        })
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealMatrix {}x{} [", self.n_rows, self.n_cols)?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha · x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Componentwise `a − b`.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}
