//! Absolute compatibility: the defining identity, its equivalent criteria,
//! the block certificate and the structure decompositions built on r(a), s(a), n(a).

mod certificate;
mod structure;

pub use certificate::{check_block_characterization, BlockCertificate, CertificateResiduals, DegenerateCase};
pub use structure::{
    commutes_within_compat, decompose_commuting, decompose_triple, refine_decomposition, FiveFoldDecomposition,
    TripleDecomposition,
};

use crate::error::Result;
use crate::linalg::{abs_value, hermitian_eig, jordan, ComplexMatrix, Hermitian, TolerancePolicy};
use crate::order::{PositiveContraction, Projection};
use crate::scalar::Real;

/// `‖ |a − b| + |1 − a − b| − 1 ‖_F`.
pub fn definition_residual<T: Real>(a: &Hermitian<T>, b: &Hermitian<T>) -> Result<T> {
    a.ensure_same_shape(b)?;
    let n = a.n();
    let one = ComplexMatrix::<T>::identity(n);
    let diff = a.matrix() - b.matrix();
    let rest = &(&one - a.matrix()) - b.matrix();
    let sum = abs_value(&diff)?.add(&abs_value(&rest)?);
    Ok((sum.matrix() - &one).frobenius_norm())
}

/// `a △ b`: the definition residual is at most `eq_tol`.
pub fn is_abs_compatible<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<bool> {
    Ok(definition_residual(a.hermitian(), b.hermitian())? <= pol.eq_tol)
}

/// Outcome of a positivity-plus-zero-product criterion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositivityCriterion<T = f64> {
    pub holds: bool,
    pub min_eig_first: T,
    pub min_eig_second: T,
    /// `‖x y‖_F` for the two Jordan products.
    pub product_residual: T,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualCriterion<T = f64> {
    pub holds: bool,
    pub residual: T,
}

/// All four equivalent characterizations evaluated side by side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompatibilityReport<T = f64> {
    /// `‖|a−b| + |1−a−b| − 1‖_F`.
    pub residual_def: T,
    /// `2 a∘b = a + b − |a − b|`.
    pub criterion_b: ResidualCriterion<T>,
    /// `a∘b ≥ 0`, `(1−a)∘(1−b) ≥ 0` and their product vanishes.
    pub criterion_c: PositivityCriterion<T>,
    /// `a∘(1−b) ≥ 0`, `(1−a)∘b ≥ 0` and their product vanishes.
    pub criterion_d: PositivityCriterion<T>,
    pub verdict: bool,
}

impl<T: Real> CompatibilityReport<T> {
    pub fn criterion_a(&self) -> bool {
        self.verdict
    }

    /// The four verdicts in order (definition, b, c, d).
    pub fn verdicts(&self) -> [bool; 4] {
        [self.verdict, self.criterion_b.holds, self.criterion_c.holds, self.criterion_d.holds]
    }

    pub fn all_agree(&self) -> bool {
        let v = self.verdicts();
        v.iter().all(|&x| x == v[0])
    }
}

fn positivity<T: Real>(x: &Hermitian<T>, y: &Hermitian<T>, pol: &TolerancePolicy<T>) -> Result<PositivityCriterion<T>> {
    let min_x = hermitian_eig(x)?.min();
    let min_y = hermitian_eig(y)?.min();
    let product_residual = (x.matrix() * y.matrix()).frobenius_norm();
    Ok(PositivityCriterion {
        holds: min_x >= -pol.eq_tol && min_y >= -pol.eq_tol && product_residual <= pol.eq_tol,
        min_eig_first: min_x,
        min_eig_second: min_y,
        product_residual,
    })
}

pub fn compatibility_report<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<CompatibilityReport<T>> {
    let (ah, bh) = (a.hermitian(), b.hermitian());
    let residual_def = definition_residual(ah, bh)?;
    let (ac, bc) = (ah.complement(), bh.complement());

    let ab = jordan(ah, bh)?;
    let abs_diff = abs_value(&(ah.matrix() - bh.matrix()))?;
    let rhs = &(ah.matrix() + bh.matrix()) - abs_diff.matrix();
    let res_b = (&ab.matrix().scale(T::two()) - &rhs).frobenius_norm();

    let criterion_c = positivity(&ab, &jordan(&ac, &bc)?, pol)?;
    let criterion_d = positivity(&jordan(ah, &bc)?, &jordan(&ac, bh)?, pol)?;

    Ok(CompatibilityReport {
        residual_def,
        criterion_b: ResidualCriterion { holds: res_b <= pol.eq_tol, residual: res_b },
        criterion_c,
        criterion_d,
        verdict: residual_def <= pol.eq_tol,
    })
}

/// A projection is absolutely compatible with `a` exactly when it commutes with `a`.
pub fn projection_compat<T: Real>(
    p: &Projection<T>,
    a: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<bool> {
    p.matrix().ensure_same_shape(a.matrix())?;
    if p.idempotency_residual() > pol.eq_tol {
        return Err(crate::Error::NotProjection { residual: p.idempotency_residual().as_f64() });
    }
    Ok(p.matrix().commutator_norm(a.matrix()) <= pol.eq_tol)
}

/// Orthogonality through compatibility: `a + b ≤ 1` and `a △ b`.
pub fn orthogonal_iff<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<bool> {
    let sum = a.hermitian().add(b.hermitian());
    let below_one = hermitian_eig(&sum)?.max() <= T::one() + pol.eig_tol.max(pol.eq_tol);
    Ok(below_one && is_abs_compatible(a, b, pol)?)
}
