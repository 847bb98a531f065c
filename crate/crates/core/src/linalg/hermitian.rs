use std::ops::Deref;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// A square matrix checked to be Hermitian up to a relative tolerance.
///
/// The stored matrix is exactly Hermitian: construction replaces the input by
/// its Hermitian part once the defect check passes.
#[derive(Clone, Debug, PartialEq)]
pub struct Hermitian<T = f64>(ComplexMatrix<T>);

impl<T: Real> Hermitian<T> {
    /// Accepts `m` when `‖m - m*‖_F ≤ tol·‖m‖_F`.
    pub fn new(m: ComplexMatrix<T>, tol: T) -> Result<Self> {
        m.ensure_square()?;
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = m.hermitian_defect();
        if defect > tol * m.frobenius_norm() {
            let rel = defect / m.frobenius_norm();
            return Err(Error::NonHermitian { residual: rel.as_f64() });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Takes the Hermitian part of an arbitrary square matrix.
    pub fn symmetrize(m: &ComplexMatrix<T>) -> Self {
        Self(m.hermitian_part())
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn diag(values: &[T]) -> Self {
        Self(ComplexMatrix::diag(values))
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(rows), T::lit(1e-12).max(T::epsilon()))
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    pub fn real_trace(&self) -> T {
        self.0.trace().re
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Self(&ComplexMatrix::identity(self.n()) - &self.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.scale(s))
    }

    /// `basis* · self · basis`, Hermitian for any basis.
    pub fn compress(&self, basis: &ComplexMatrix<T>) -> Self {
        Self::symmetrize(&self.0.compress(basis))
    }

    pub fn embed(&self, basis: &ComplexMatrix<T>) -> Self {
        Self::symmetrize(&self.0.embed(basis))
    }

    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Self {
        self.compress(u)
    }

    pub fn direct_sum(blocks: &[&Self]) -> Self {
        let ms: Vec<&ComplexMatrix<T>> = blocks.iter().map(|b| &b.0).collect();
        Self(ComplexMatrix::direct_sum(&ms))
    }

    /// Rayleigh quotient-free diagonal read-off, used by the 2x2 code.
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.0[(i, j)]
    }
}

impl<T> Deref for Hermitian<T> {
    type Target = ComplexMatrix<T>;

    fn deref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}

impl<T> AsRef<ComplexMatrix<T>> for Hermitian<T> {
    fn as_ref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}
