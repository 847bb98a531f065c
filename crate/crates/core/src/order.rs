//! Positive contractions and their spectral projections: r(a), s(a), e(a),
//! n(a), strictness, projection frames and block representations.

use log::warn;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, EigenSystem, Hermitian, TolerancePolicy};
use crate::scalar::Real;

/// A Hermitian matrix with spectrum in `[0, 1]`, stored with its eigensystem.
#[derive(Clone, Debug)]
pub struct PositiveContraction<T = f64> {
    matrix: Hermitian<T>,
    eigen: EigenSystem<T>,
}

/// Eigenvalue indices split into the three classification bands.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralClasses<T = f64> {
    pub band: T,
    pub zero: Vec<usize>,
    pub strict: Vec<usize>,
    pub one: Vec<usize>,
    /// Some strict-band eigenvalue lies within `10·band` of 0 or 1.
    pub near_band_edge: bool,
}

impl<T: Real> PositiveContraction<T> {
    /// Accepts spectra inside `[-eig_tol, 1 + eig_tol]` and clamps them into
    /// `[0, 1]`; anything further out is rejected.
    pub fn new(matrix: Hermitian<T>, pol: &TolerancePolicy<T>) -> Result<Self> {
        let eigen = hermitian_eig(&matrix)?;
        let slack = pol.eig_tol * T::one().max(eigen.spectral_radius());
        let (lo, hi) = (eigen.min(), eigen.max());
        if lo < -slack || hi > T::one() + slack {
            return Err(Error::NotContraction { min: lo.as_f64(), max: hi.as_f64() });
        }
        Ok(Self::from_eigen_clamped(eigen, Some(matrix)))
    }

    pub fn from_matrix(m: ComplexMatrix<T>, pol: &TolerancePolicy<T>) -> Result<Self> {
        let tol = pol.eq_tol;
        Self::new(Hermitian::new(m, tol)?, pol)
    }

    pub fn from_real(rows: &[&[f64]], pol: &TolerancePolicy<T>) -> Result<Self> {
        Self::new(Hermitian::from_real(rows)?, pol)
    }

    /// Builds `V diag(values) V*` with values clamped to `[0, 1]`.
    pub fn from_spectrum(values: &[T], vectors: &ComplexMatrix<T>) -> Self {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
        let eigen = EigenSystem {
            values: idx.iter().map(|&i| values[i]).collect(),
            vectors: vectors.select_columns(&idx),
        };
        Self::from_eigen_clamped(eigen, None)
    }

    pub fn diag(values: &[T]) -> Self {
        Self::from_spectrum(values, &ComplexMatrix::identity(values.len()))
    }

    pub fn zeros(n: usize) -> Self {
        Self::diag(&vec![T::zero(); n])
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![T::one(); n])
    }

    fn from_eigen_clamped(mut eigen: EigenSystem<T>, matrix: Option<Hermitian<T>>) -> Self {
        let outside = eigen.values.iter().any(|&l| l < T::zero() || l > T::one());
        for l in &mut eigen.values {
            *l = l.max(T::zero()).min(T::one());
        }
        let matrix = match matrix {
            Some(m) if !outside => m,
            _ => eigen.apply(|l| l),
        };
        Self { matrix, eigen }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn hermitian(&self) -> &Hermitian<T> {
        &self.matrix
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.matrix.matrix()
    }

    pub fn eigen(&self) -> &EigenSystem<T> {
        &self.eigen
    }

    /// `1 - a`, sharing the eigenvectors of `a`.
    pub fn complement(&self) -> Self {
        let values: Vec<T> = self.eigen.values.iter().map(|&l| T::one() - l).collect();
        let mut out = Self::from_spectrum(&values, &self.eigen.vectors);
        out.matrix = self.matrix.complement();
        out
    }

    /// `u* a u`.
    pub fn conjugate_by(&self, u: &ComplexMatrix<T>) -> Self {
        let vectors = &u.adjoint() * &self.eigen.vectors;
        let mut out = Self::from_spectrum(&self.eigen.values, &vectors);
        out.matrix = self.matrix.conjugate_by(u);
        out
    }

    pub fn direct_sum(parts: &[&Self]) -> Self {
        let values: Vec<T> = parts.iter().flat_map(|p| p.eigen.values.iter().copied()).collect();
        let vecs: Vec<&ComplexMatrix<T>> = parts.iter().map(|p| &p.eigen.vectors).collect();
        let mut out = Self::from_spectrum(&values, &ComplexMatrix::direct_sum(&vecs));
        let ms: Vec<&Hermitian<T>> = parts.iter().map(|p| &p.matrix).collect();
        out.matrix = Hermitian::direct_sum(&ms);
        out
    }

    /// Spectral classification band for this matrix.
    pub fn band(&self, pol: &TolerancePolicy<T>) -> T {
        pol.rank_band(self.n(), self.eigen.spectral_radius())
    }

    pub fn classes(&self, pol: &TolerancePolicy<T>) -> SpectralClasses<T> {
        let band = self.band(pol);
        let edge = T::lit(10.0) * band;
        let mut c = SpectralClasses { band, zero: vec![], strict: vec![], one: vec![], near_band_edge: false };
        for (i, &l) in self.eigen.values.iter().enumerate() {
            if l <= band {
                c.zero.push(i);
            } else if l >= T::one() - band {
                c.one.push(i);
            } else {
                if l <= edge || l >= T::one() - edge {
                    c.near_band_edge = true;
                }
                c.strict.push(i);
            }
        }
        if c.near_band_edge {
            warn!("eigenvalue within 10x the classification band of 0 or 1; projections may be unstable");
        }
        c
    }

    fn class_projection(&self, idx: &[usize]) -> Projection<T> {
        let basis = self.eigen.vectors.select_columns(idx);
        Projection::from_basis(&basis)
    }

    /// r(a): projection onto eigenvalues above the zero band.
    pub fn range_projection(&self, pol: &TolerancePolicy<T>) -> Projection<T> {
        let c = self.classes(pol);
        let idx: Vec<usize> = c.strict.iter().chain(&c.one).copied().collect();
        self.class_projection(&idx)
    }

    /// s(a) = 1 − r(1 − a): projection onto eigenvalues in the one band.
    pub fn support_projection(&self, pol: &TolerancePolicy<T>) -> Projection<T> {
        self.class_projection(&self.classes(pol).one)
    }

    /// n(a) = 1 − r(a).
    pub fn null_projection(&self, pol: &TolerancePolicy<T>) -> Projection<T> {
        self.class_projection(&self.classes(pol).zero)
    }

    /// r(e(a)): projection onto the strict band.
    pub fn strict_range_projection(&self, pol: &TolerancePolicy<T>) -> Projection<T> {
        self.class_projection(&self.classes(pol).strict)
    }

    /// e(a) = a − s(a), the almost strict part.
    ///
    /// Built on the spectrum so that eigenvalues classified as 0 or 1 contribute
    /// exactly zero; this differs from the literal subtraction by at most the
    /// classification band per eigenvalue.
    pub fn almost_strict_part(&self, pol: &TolerancePolicy<T>) -> Self {
        let c = self.classes(pol);
        let mut values = vec![T::zero(); self.n()];
        for &i in &c.strict {
            values[i] = self.eigen.values[i];
        }
        Self::from_spectrum(&values, &self.eigen.vectors)
    }

    /// The frame (s(a), r(e(a)), n(a)).
    pub fn projection_system(&self, pol: &TolerancePolicy<T>) -> Result<ProjectionSystem<T>> {
        let c = self.classes(pol);
        ProjectionSystem::new(
            vec![self.class_projection(&c.one), self.class_projection(&c.strict), self.class_projection(&c.zero)],
            pol,
        )
    }

    /// Spectrum inside the open band `(band, 1 − band)`.
    pub fn is_strict(&self, pol: &TolerancePolicy<T>) -> bool {
        let c = self.classes(pol);
        c.zero.is_empty() && c.one.is_empty()
    }

    /// `‖a² − a‖_F`.
    pub fn idempotency_residual(&self) -> T {
        let m = self.matrix();
        (&(m * m) - m).frobenius_norm()
    }
}

impl<T: Real> PartialEq for PositiveContraction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

/// Orthogonal projection, `p = p* = p²` within `eq_tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection<T = f64> {
    matrix: Hermitian<T>,
    rank: usize,
}

impl<T: Real> Projection<T> {
    pub fn new(matrix: Hermitian<T>, pol: &TolerancePolicy<T>) -> Result<Self> {
        let m = matrix.matrix();
        let residual = (&(m * m) - m).frobenius_norm();
        if residual > pol.eq_tol {
            return Err(Error::NotProjection { residual: residual.as_f64() });
        }
        let rank = matrix.real_trace().round().to_usize().unwrap_or(0);
        Ok(Self { matrix, rank })
    }

    /// `V V*` for an isometry `V` (orthonormal columns).
    pub fn from_basis(basis: &ComplexMatrix<T>) -> Self {
        let matrix = Hermitian::symmetrize(&(basis * &basis.adjoint()));
        Self { matrix, rank: basis.cols() }
    }

    pub fn zeros(n: usize) -> Self {
        Self { matrix: Hermitian::zeros(n), rank: 0 }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: Hermitian::identity(n), rank: n }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    pub fn hermitian(&self) -> &Hermitian<T> {
        &self.matrix
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.matrix.matrix()
    }

    pub fn complement(&self) -> Self {
        Self { matrix: self.matrix.complement(), rank: self.n() - self.rank }
    }

    pub fn idempotency_residual(&self) -> T {
        let m = self.matrix();
        (&(m * m) - m).frobenius_norm()
    }

    /// An isometry `n x rank` whose range is the range of `p`.
    pub fn basis(&self) -> Result<ComplexMatrix<T>> {
        let es = hermitian_eig(&self.matrix)?;
        Ok(es.basis(|l| l > T::half()))
    }

    pub fn as_contraction(&self) -> PositiveContraction<T> {
        let es = hermitian_eig(&self.matrix).expect("projection spectrum converges");
        let values: Vec<T> = es.values.iter().map(|&l| if l > T::half() { T::one() } else { T::zero() }).collect();
        let mut out = PositiveContraction::from_spectrum(&values, &es.vectors);
        out.matrix = self.matrix.clone();
        out
    }
}

/// Mutually orthogonal projections summing to the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionSystem<T = f64> {
    projections: Vec<Projection<T>>,
}

impl<T: Real> ProjectionSystem<T> {
    pub fn new(projections: Vec<Projection<T>>, pol: &TolerancePolicy<T>) -> Result<Self> {
        let n = projections.first().map(Projection::n).ok_or_else(|| Error::InvalidSystem {
            reason: "empty projection list".into(),
        })?;
        let mut sum = ComplexMatrix::<T>::zeros(n, n);
        for (i, p) in projections.iter().enumerate() {
            if p.n() != n {
                return Err(Error::DimensionMismatch { expected: n, found: p.n() });
            }
            for (j, q) in projections.iter().enumerate().skip(i + 1) {
                let prod = (p.matrix() * q.matrix()).frobenius_norm();
                if prod > pol.eq_tol {
                    return Err(Error::InvalidSystem {
                        reason: format!("projections {i} and {j} overlap (product norm {:e})", prod.as_f64()),
                    });
                }
            }
            sum = &sum + p.matrix();
        }
        let defect = (&sum - &ComplexMatrix::identity(n)).frobenius_norm();
        if defect > pol.eq_tol {
            return Err(Error::InvalidSystem {
                reason: format!("projections sum to identity only within {:e}", defect.as_f64()),
            });
        }
        Ok(Self { projections })
    }

    pub fn trivial(n: usize) -> Self {
        Self { projections: vec![Projection::identity(n)] }
    }

    pub fn projections(&self) -> &[Projection<T>] {
        &self.projections
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    pub fn n(&self) -> usize {
        self.projections[0].n()
    }

    /// Splits `x` into blocks `p_i x p_j`.
    pub fn block_decompose(&self, x: &ComplexMatrix<T>) -> Result<BlockMatrix<T>> {
        if x.rows() != self.n() || x.cols() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: x.rows() });
        }
        let blocks = self
            .projections
            .iter()
            .map(|p| {
                let px = p.matrix() * x;
                self.projections.iter().map(|q| &px * q.matrix()).collect()
            })
            .collect();
        Ok(BlockMatrix { system: self.clone(), blocks })
    }
}

/// The `k x k` array of blocks `p_i x p_j` of a matrix relative to a frame,
/// each stored at full size.
#[derive(Clone, Debug)]
pub struct BlockMatrix<T = f64> {
    pub system: ProjectionSystem<T>,
    pub blocks: Vec<Vec<ComplexMatrix<T>>>,
}

impl<T: Real> BlockMatrix<T> {
    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix<T> {
        &self.blocks[i][j]
    }

    pub fn reassemble(&self) -> ComplexMatrix<T> {
        let n = self.system.n();
        self.blocks.iter().flatten().fold(ComplexMatrix::zeros(n, n), |acc, b| &acc + b)
    }

    /// Frobenius mass of all blocks with `i != j`.
    pub fn off_diagonal_leak(&self) -> T {
        let mut acc = T::zero();
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if i != j {
                    let f = b.frobenius_norm();
                    acc += f * f;
                }
            }
        }
        acc.sqrt()
    }
}

/// The corner `pMp` of a projection, realised through an isometry onto its range.
#[derive(Clone, Debug)]
pub struct Corner<T = f64> {
    basis: ComplexMatrix<T>,
}

impl<T: Real> Corner<T> {
    pub fn of(p: &Projection<T>) -> Result<Self> {
        Ok(Self { basis: p.basis()? })
    }

    pub fn from_basis(basis: ComplexMatrix<T>) -> Self {
        Self { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix<T> {
        &self.basis
    }

    /// `V* x V` as a positive contraction of the corner.
    pub fn compress(&self, x: &PositiveContraction<T>) -> PositiveContraction<T> {
        let h = x.hermitian().compress(&self.basis);
        let es = hermitian_eig(&h).expect("compression of a Hermitian matrix converges");
        let mut out = PositiveContraction::from_spectrum(&es.values, &es.vectors);
        if !es.values.iter().any(|&l| l < T::zero() || l > T::one()) {
            out.matrix = h;
        }
        out
    }

    /// `V y V*`, the element of `pMp` represented by the corner element `y`.
    pub fn embed(&self, y: &PositiveContraction<T>) -> PositiveContraction<T> {
        let values: Vec<T> = y
            .eigen()
            .values
            .iter()
            .copied()
            .chain(std::iter::repeat_n(T::zero(), self.basis.rows() - self.dim()))
            .collect();
        let n = self.basis.rows();
        let inner = &self.basis * &y.eigen().vectors;
        // Complete the embedded eigenvectors with an orthonormal basis of the
        // complement so the stored eigensystem stays square.
        let comp = Projection::from_basis(&self.basis).complement();
        let extra = comp.basis().expect("complement basis converges");
        let vectors = inner.hstack(&extra);
        debug_assert_eq!(vectors.cols(), n);
        let mut out = PositiveContraction::from_spectrum(&values, &vectors);
        out.matrix = y.hermitian().embed(&self.basis);
        out
    }
}

/// `a b* = b* a = 0` within `eq_tol`.
pub fn is_orthogonal<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, pol: &TolerancePolicy<T>) -> Result<bool> {
    a.ensure_same_shape(b)?;
    let bs = b.adjoint();
    Ok((a * &bs).frobenius_norm() <= pol.eq_tol && (&bs * a).frobenius_norm() <= pol.eq_tol)
}
