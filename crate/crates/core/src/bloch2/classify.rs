use num_complex::Complex;

use crate::compat::definition_residual;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TolerancePolicy};
use crate::order::{PositiveContraction, Projection};
use crate::scalar::Real;

use super::geometry::StrictParam;

/// A minimal projection in M2 together with its canonical unit vector
/// (first nonzero component real and positive).
#[derive(Clone, Debug, PartialEq)]
pub struct MinimalProjection<T = f64> {
    pub vector: [Complex<T>; 2],
    pub projection: Projection<T>,
}

impl<T: Real> MinimalProjection<T> {
    fn from_vector(v: [Complex<T>; 2]) -> Self {
        let lead = if v[0].norm() > T::lit(1e-12) { v[0] } else { v[1] };
        let phase = lead.conj() / lead.norm();
        let v = [v[0] * phase, v[1] * phase];
        let basis = ComplexMatrix::from_fn(2, 1, |i, _| v[i]);
        Self { vector: v, projection: Projection::from_basis(&basis) }
    }

    /// The eigenvector of `x` for its largest eigenvalue.
    fn top_eigenvector(x: &PositiveContraction<T>) -> Self {
        let col = x.eigen().vectors.column(1);
        Self::from_vector([col[0], col[1]])
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.projection.matrix()
    }

    /// `tr(x p)`.
    pub fn weight(&self, x: &ComplexMatrix<T>) -> T {
        (x * self.matrix()).trace().re
    }

    /// `tr(x (1 − p))`.
    pub fn co_weight(&self, x: &ComplexMatrix<T>) -> T {
        x.trace().re - self.weight(x)
    }
}

/// Canonical form of a compatible pair in M2.
///
/// For the non-strict cases, `complemented` marks that the form describes the
/// pair `(1 − a, 1 − b)`: when `a` has a kernel but no unit eigenvalue, the
/// pattern is matched on the complements.
#[derive(Clone, Debug, PartialEq)]
pub enum PairClass<T = f64> {
    NotCompatible { residual: T },
    /// `a` strict, `b = p` and `a = αp + β(1−p)`.
    CommutingStrict { p: MinimalProjection<T>, alpha: T, beta: T },
    /// `a = p`, `b = λp + μ(1−p)`.
    NonStrictCase1 { p: MinimalProjection<T>, lambda: T, mu: T, complemented: bool },
    /// `a = p + t(1−p)`, `b = λp`.
    NonStrictCase2 { p: MinimalProjection<T>, t: T, lambda: T, complemented: bool },
    /// `a = p + t(1−p)`, `b = λp + (1−p)`.
    NonStrictCase3 { p: MinimalProjection<T>, t: T, lambda: T, complemented: bool },
    /// Both strict with trace one, `ab ≠ ba`; carries the parameters of `a`.
    StrictNonCommuting { a: StrictParam<T>, b: StrictParam<T> },
}

impl<T: Real> PairClass<T> {
    pub fn tag(&self) -> &'static str {
        match self {
            PairClass::NotCompatible { .. } => "not-compatible",
            PairClass::CommutingStrict { .. } => "commuting-strict-projection-partner",
            PairClass::NonStrictCase1 { .. } => "non-strict-projection",
            PairClass::NonStrictCase2 { .. } => "non-strict-partner-below",
            PairClass::NonStrictCase3 { .. } => "non-strict-partner-above",
            PairClass::StrictNonCommuting { .. } => "strict-non-commuting",
        }
    }
}

fn near<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, tol: T) -> bool {
    (x - y).frobenius_norm() <= tol
}

pub fn classify_pair_2x2<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<PairClass<T>> {
    a.matrix().ensure_same_shape(b.matrix())?;
    if a.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.n() });
    }
    let zero = ComplexMatrix::zeros(2, 2);
    let one = ComplexMatrix::identity(2);
    for x in [a, b] {
        if near(x.matrix(), &zero, pol.eq_tol) || near(x.matrix(), &one, pol.eq_tol) {
            return Err(Error::TrivialInput);
        }
    }

    let residual = definition_residual(a.hermitian(), b.hermitian())?;
    if residual > pol.eq_tol {
        return Ok(PairClass::NotCompatible { residual });
    }

    let commuting = a.matrix().commutator_norm(b.matrix()) <= pol.eq_tol;
    if !commuting {
        if !(a.is_strict(pol) && b.is_strict(pol)) {
            return Err(Error::ClassificationInconsistent {
                reason: "non-commuting compatible pair with a non-strict element".into(),
            });
        }
        return Ok(PairClass::StrictNonCommuting {
            a: StrictParam::from_contraction(a, pol)?,
            b: StrictParam::from_contraction(b, pol)?,
        });
    }

    if a.is_strict(pol) {
        let p = MinimalProjection::top_eigenvector(b);
        if !near(b.matrix(), p.matrix(), pol.eq_tol) {
            return Err(Error::ClassificationInconsistent {
                reason: "strict element commutes with a compatible partner that is not a projection".into(),
            });
        }
        let alpha = p.weight(a.matrix());
        let beta = p.co_weight(a.matrix());
        return Ok(PairClass::CommutingStrict { p, alpha, beta });
    }

    if a.support_projection(pol).is_zero() {
        let inner = classify_non_strict(&a.complement(), &b.complement(), pol)?;
        return Ok(mark_complemented(inner));
    }
    classify_non_strict(a, b, pol)
}

fn mark_complemented<T: Real>(c: PairClass<T>) -> PairClass<T> {
    match c {
        PairClass::NonStrictCase1 { p, lambda, mu, .. } => PairClass::NonStrictCase1 { p, lambda, mu, complemented: true },
        PairClass::NonStrictCase2 { p, t, lambda, .. } => PairClass::NonStrictCase2 { p, t, lambda, complemented: true },
        PairClass::NonStrictCase3 { p, t, lambda, .. } => PairClass::NonStrictCase3 { p, t, lambda, complemented: true },
        other => other,
    }
}

/// `a` has a unit eigenvalue; `p = s(a)` is then a minimal projection.
fn classify_non_strict<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<PairClass<T>> {
    let p = MinimalProjection::top_eigenvector(a);
    let q = &ComplexMatrix::identity(2) - p.matrix();
    let t = p.co_weight(a.matrix());
    let lambda = p.weight(b.matrix());
    let mu = p.co_weight(b.matrix());
    let rebuilt = &p.matrix().scale(lambda) + &q.scale(mu);
    if !near(b.matrix(), &rebuilt, T::lit(10.0) * pol.eq_tol) {
        return Err(Error::ClassificationInconsistent {
            reason: "partner is not diagonal in the frame of the support projection".into(),
        });
    }

    let band = a.band(pol);
    if !a.null_projection(pol).is_zero() {
        return Ok(PairClass::NonStrictCase1 { p, lambda, mu, complemented: false });
    }
    let t_clean = if t.abs() <= band { T::zero() } else { t };
    if mu.abs() <= pol.eq_tol {
        Ok(PairClass::NonStrictCase2 { p, t: t_clean, lambda, complemented: false })
    } else if (mu - T::one()).abs() <= pol.eq_tol {
        Ok(PairClass::NonStrictCase3 { p, t: t_clean, lambda, complemented: false })
    } else {
        Err(Error::ClassificationInconsistent {
            reason: "partner weight on the strict part of a is neither 0 nor 1".into(),
        })
    }
}
