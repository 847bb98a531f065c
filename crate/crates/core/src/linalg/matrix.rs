use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major complex matrix.
///
/// Most of the crate works with square matrices; rectangular shapes appear
/// only for isometries (orthonormal column bases) and their adjoints.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T = f64> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn scalar_identity(n: usize, value: T) -> Self {
        Self::diag(&vec![value; n])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        let data: Vec<_> = rows.into_iter().flatten().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Square real matrix from `f64` literals, handy for fixed examples.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Self::from_fn(n, rows[0].len(), |i, j| Complex::new(T::lit(rows[i][j]), T::zero()))
    }

    /// Square matrix from separate real and imaginary `f64` parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: im.len() });
        }
        let mut rows = Vec::with_capacity(n);
        for (r, i) in re.iter().zip(im) {
            if r.len() != n || i.len() != n {
                return Err(Error::NotSquare { rows: n, cols: r.len().max(i.len()) });
            }
            rows.push(r.iter().zip(i).map(|(&a, &b)| Complex::new(T::lit(a), T::lit(b))).collect());
        }
        Self::from_rows(rows)
    }

    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, T::zero());
        }
        m
    }

    /// Block-diagonal direct sum of square blocks.
    pub fn direct_sum(blocks: &[&ComplexMatrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(n, n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(offset + i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.rows;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Dimension of a square matrix.
    #[inline]
    pub fn n(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn ensure_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn real_diagonal(&self) -> Vec<T> {
        self.diagonal().into_iter().map(|z| z.re).collect()
    }

    /// `x - x*`, measured in Frobenius norm.
    pub fn hermitian_defect(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(x + x*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let half = T::half();
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// `(x - x*) / 2i`, Hermitian for any square `x`.
    pub fn skew_hermitian_part_over_i(&self) -> Self {
        let half = T::half();
        Self::from_fn(self.rows, self.cols, |i, j| {
            let d = (self[(i, j)] - self[(j, i)].conj()) * half;
            // d / i = -i d
            Complex::new(d.im, -d.re)
        })
    }

    /// `xy - yx`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn commutator_norm(&self, other: &Self) -> T {
        self.commutator(other).frobenius_norm()
    }

    /// `xx* - x*x`, zero exactly when `x` is normal.
    pub fn normality_defect(&self) -> T {
        let adj = self.adjoint();
        (&(self * &adj) - &(&adj * self)).frobenius_norm()
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Submatrix made of the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                other[(i, j - self.cols)]
            }
        })
    }

    /// Contiguous square sub-block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    /// `basis* · self · basis` for an `n x m` basis.
    pub fn compress(&self, basis: &Self) -> Self {
        &(&basis.adjoint() * self) * basis
    }

    /// `basis · self · basis*`, the inverse of [`compress`](Self::compress) on the corner.
    pub fn embed(&self, basis: &Self) -> Self {
        &(basis * self) * &basis.adjoint()
    }

    /// `u* · self · u`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        self.compress(u)
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> Complex<T> {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        let mut lu = self.clone();
        let mut det = Complex::<T>::one();
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&a, &b| lu[(a, k)].norm().partial_cmp(&lu[(b, k)].norm()).unwrap_or(std::cmp::Ordering::Equal))
                .unwrap_or(k);
            if lu[(pivot, k)].norm_sqr() == T::zero() {
                return Complex::zero();
            }
            if pivot != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = lu[(k, k)];
            det *= p;
            for i in (k + 1)..n {
                let f = lu[(i, k)] / p;
                for j in k..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
            }
        }
        det
    }

    /// `Σ_k x_k` for a non-empty slice of equally shaped matrices.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Self>) -> Option<Self>
    where
        T: 'a,
    {
        let mut it = items.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, x| &acc + x))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| -z).collect() }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.cols, rhs.rows, "mul shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}
