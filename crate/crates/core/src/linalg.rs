//! Dense complex vectors and matrices.
//!
//! Everything here is plain row-major `f64` storage. Systems stay small
//! (dense matrices are only ever built for the circuit registers, never for
//! the full state space), so no sparsity or blocking is attempted.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;

/// Euclidean tolerance for state comparisons.
pub const STATE_TOL: f64 = 1e-12;
/// Entrywise tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;
/// Largest dimension a Kronecker product is allowed to produce.
pub const MAX_KRON_DIM: usize = 1 << 12;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_finite(entries: &[Complex64]) -> Result<()> {
    for (i, c) in entries.iter().enumerate() {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::NonFiniteEntry { index: i });
        }
    }
    Ok(())
}

/// Column vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    amps: Vec<Complex64>,
}

impl DenseVector {
    /// Builds a vector, rejecting NaN/infinite entries.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        check_finite(&amps)?;
        Ok(Self { amps })
    }

    /// Computational basis vector |index> of the given dimension.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::BasisIndexOutOfRange { index, dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amps.iter().map(|c| c.norm_sqr()).sum())
    }

    /// <self|other>.
    pub fn inner(&self, other: &DenseVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Plain Euclidean distance ||self - other||.
    pub fn distance(&self, other: &DenseVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let sq: f64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(libm::sqrt(sq))
    }

    /// Euclidean distance minimized over a global phase on `other`.
    ///
    /// Zero iff the states are physically identical. Computed by phase-
    /// aligning `other` and taking the direct distance; the closed form
    /// sqrt(2 - 2|<a|b>|) amplifies roundoff near zero.
    pub fn distance_up_to_phase(&self, other: &DenseVector) -> Result<f64> {
        let overlap = self.inner(other)?;
        let mag = overlap.norm();
        let phase = if mag > 0.0 { overlap.conj() / mag } else { ONE };
        let sq: f64 = self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - phase * b).norm_sqr())
            .sum();
        Ok(libm::sqrt(sq))
    }

    /// |<self|other>|^2.
    pub fn fidelity(&self, other: &DenseVector) -> Result<f64> {
        let overlap = self.inner(other)?.norm();
        Ok(overlap * overlap)
    }

    /// Scales to unit norm. Returns the norm the vector had before.
    pub fn normalize(&mut self) -> Result<f64> {
        let norm = self.norm();
        if norm <= 1e-9 {
            return Err(Error::ZeroStateNorm);
        }
        let inv = 1.0 / norm;
        for c in &mut self.amps {
            *c *= inv;
        }
        Ok(norm)
    }
}

/// Row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        check_finite(&entries)?;
        Ok(Self { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![ZERO; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from rows of (re, im) pairs; handy for gate constants.
    pub fn from_rows(rows: &[&[(f64, f64)]]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = if nrows > 0 { rows[0].len() } else { 0 };
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch { expected: ncols, got: row.len() });
            }
            entries.extend(row.iter().map(|&(re, im)| Complex64::new(re, im)));
        }
        Self::new(nrows, ncols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.entries
    }

    /// Kronecker product self (x) other.
    pub fn kron(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        let rows = self.rows.checked_mul(other.rows);
        let cols = self.cols.checked_mul(other.cols);
        let (rows, cols) = match (rows, cols) {
            (Some(r), Some(c)) if r <= MAX_KRON_DIM && c <= MAX_KRON_DIM => (r, c),
            _ => {
                return Err(Error::KronTooLarge {
                    rows: self.rows.saturating_mul(other.rows),
                    cols: self.cols.saturating_mul(other.cols),
                    max: MAX_KRON_DIM,
                })
            }
        };
        let mut out = DenseMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    /// Max entrywise |A†A - I| <= tol. Non-square matrices are rejected.
    pub fn is_unitary(&self, tol: f64) -> Result<bool> {
        Ok(self.unitarity_deviation()? <= tol)
    }

    /// Max entrywise deviation of A†A from the identity.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut max_dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                // (A†A)[i][j] = sum_k conj(A[k][i]) A[k][j]
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                let target = if i == j { ONE } else { ZERO };
                let dev = (acc - target).norm();
                if dev > max_dev {
                    max_dev = dev;
                }
            }
        }
        Ok(max_dev)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &DenseVector) -> Result<DenseVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.dim() });
        }
        let mut out = vec![ZERO; self.rows];
        for r in 0..self.rows {
            let mut acc = ZERO;
            let row = &self.entries[r * self.cols..(r + 1) * self.cols];
            for (a, b) in row.iter().zip(v.amps.iter()) {
                acc += a * b;
            }
            out[r] = acc;
        }
        Ok(DenseVector { amps: out })
    }

    /// Matrix-matrix product self * other.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Max entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let mut max = 0.0f64;
        for (a, b) in self.entries.iter().zip(other.entries.iter()) {
            let d = (a - b).norm();
            if d > max {
                max = d;
            }
        }
        Ok(max)
    }
}
