use crate::error::Result;
use crate::linalg::{hermitian_eig, jordan, ComplexMatrix, TolerancePolicy};
use crate::order::{PositiveContraction, Projection};
use crate::scalar::Real;

/// Which of the three situations the range projection of `a∘b` falls into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegenerateCase {
    /// `a∘b = 0`; the certificate additionally requires `a ⊥ b`.
    P1Zero,
    /// `a∘b` invertible; the certificate additionally requires `(1−a) ⊥ (1−b)`.
    P1One,
    Generic,
}

/// Residuals of the block identities relative to `{p1, 1 − p1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertificateResiduals<T = f64> {
    /// `a12 + b12`.
    pub off_diagonal_sum: T,
    /// `a12 a12* − (p1 − a11)(p1 − b11)`.
    pub upper_square: T,
    /// `a11 b11 − b11 a11`.
    pub upper_commutator: T,
    /// `a12* a12 − a22 b22`.
    pub lower_square: T,
    /// `a22 b22 − b22 a22`.
    pub lower_commutator: T,
    /// `a12 − a11 a12 − a12 a22`.
    pub intertwine_a: T,
    /// `a12 − b11 a12 − a12 b22`.
    pub intertwine_b: T,
    /// Orthogonality residual in the two degenerate cases.
    pub orthogonality: Option<T>,
}

impl<T: Real> CertificateResiduals<T> {
    /// Largest block-identity residual (orthogonality excluded).
    pub fn max_block(&self) -> T {
        [
            self.off_diagonal_sum,
            self.upper_square,
            self.upper_commutator,
            self.lower_square,
            self.lower_commutator,
            self.intertwine_a,
            self.intertwine_b,
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }

    pub fn max(&self) -> T {
        self.max_block().max(self.orthogonality.unwrap_or_else(T::zero))
    }
}

/// Evidence for (or against) compatibility through the 2x2 block identities
/// with respect to the range projection of the Jordan product.
#[derive(Clone, Debug)]
pub struct BlockCertificate<T = f64> {
    pub p1: Projection<T>,
    pub case: DegenerateCase,
    pub a11: ComplexMatrix<T>,
    pub a12: ComplexMatrix<T>,
    pub a22: ComplexMatrix<T>,
    pub b11: ComplexMatrix<T>,
    pub b12: ComplexMatrix<T>,
    pub b22: ComplexMatrix<T>,
    pub residuals: CertificateResiduals<T>,
    pub passes: bool,
}

fn orthogonality_residual<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>) -> T {
    (x * y).frobenius_norm().max((y * x).frobenius_norm())
}

pub fn check_block_characterization<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<BlockCertificate<T>> {
    let ab = jordan(a.hermitian(), b.hermitian())?;
    let n = a.n();
    let es = hermitian_eig(&ab)?;
    let band = pol.rank_band(n, es.spectral_radius());
    let basis = es.basis(|l| l.abs() > band);
    let p1 = Projection::from_basis(&basis);
    let case = match p1.rank() {
        0 => DegenerateCase::P1Zero,
        r if r == n => DegenerateCase::P1One,
        _ => DegenerateCase::Generic,
    };

    let one = ComplexMatrix::<T>::identity(n);
    let p1m = p1.matrix().clone();
    let p2m = &one - &p1m;
    let block = |x: &ComplexMatrix<T>, l: &ComplexMatrix<T>, r: &ComplexMatrix<T>| &(l * x) * r;
    let (am, bm) = (a.matrix(), b.matrix());
    let a11 = block(am, &p1m, &p1m);
    let a12 = block(am, &p1m, &p2m);
    let a22 = block(am, &p2m, &p2m);
    let b11 = block(bm, &p1m, &p1m);
    let b12 = block(bm, &p1m, &p2m);
    let b22 = block(bm, &p2m, &p2m);

    let a12s = a12.adjoint();
    let r = CertificateResiduals {
        off_diagonal_sum: (&a12 + &b12).frobenius_norm(),
        upper_square: (&(&a12 * &a12s) - &(&(&p1m - &a11) * &(&p1m - &b11))).frobenius_norm(),
        upper_commutator: a11.commutator_norm(&b11),
        lower_square: (&(&a12s * &a12) - &(&a22 * &b22)).frobenius_norm(),
        lower_commutator: a22.commutator_norm(&b22),
        intertwine_a: (&(&a12 - &(&a11 * &a12)) - &(&a12 * &a22)).frobenius_norm(),
        intertwine_b: (&(&a12 - &(&b11 * &a12)) - &(&a12 * &b22)).frobenius_norm(),
        orthogonality: match case {
            DegenerateCase::P1Zero => Some(orthogonality_residual(am, bm)),
            DegenerateCase::P1One => Some(orthogonality_residual(&(&one - am), &(&one - bm))),
            DegenerateCase::Generic => None,
        },
    };
    let passes = r.max() <= pol.eq_tol;
    Ok(BlockCertificate { p1, case, a11, a12, a22, b11, b12, b22, residuals: r, passes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::is_abs_compatible;

    fn pol() -> TolerancePolicy<f64> {
        TolerancePolicy::default()
    }

    fn pc(rows: &[&[f64]]) -> PositiveContraction<f64> {
        PositiveContraction::from_real(rows, &pol()).unwrap()
    }

    #[test]
    fn orthogonal_pair_is_p1_zero() {
        let a = PositiveContraction::diag(&[0.5, 0.0]);
        let b = PositiveContraction::diag(&[0.0, 0.7]);
        let c = check_block_characterization(&a, &b, &pol()).unwrap();
        assert_eq!(c.case, DegenerateCase::P1Zero);
        assert!(c.passes);
    }

    #[test]
    fn partner_pair_is_generic_with_lower_right_p1() {
        let a = pc(&[&[0.5, 0.25], &[0.25, 0.5]]);
        let b = pc(&[&[0.125, -0.25], &[-0.25, 0.875]]);
        let c = check_block_characterization(&a, &b, &pol()).unwrap();
        assert_eq!(c.case, DegenerateCase::Generic);
        assert!((c.p1.matrix() - &ComplexMatrix::diag(&[0.0, 1.0])).frobenius_norm() < 1e-14);
        assert!(c.passes, "{:?}", c.residuals);
    }

    #[test]
    fn three_quarter_identity_fails_upper_square() {
        let a = PositiveContraction::diag(&[0.75, 0.75]);
        let c = check_block_characterization(&a, &a, &pol()).unwrap();
        assert_eq!(c.case, DegenerateCase::P1One);
        assert!(c.residuals.off_diagonal_sum < 1e-15);
        assert!((c.residuals.upper_square - 0.0625 * 2f64.sqrt()).abs() < 1e-14);
        assert!(!c.passes);
        assert!(!is_abs_compatible(&a, &a, &pol()).unwrap());
    }

    #[test]
    fn complementary_projections_pass() {
        let p = pc(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let c = check_block_characterization(&p, &p.complement(), &pol()).unwrap();
        assert!(c.passes);
    }
}
