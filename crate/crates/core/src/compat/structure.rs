use crate::compat::{definition_residual, is_abs_compatible};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TolerancePolicy};
use crate::order::{Corner, PositiveContraction, Projection, ProjectionSystem};
use crate::scalar::Real;

/// `b = b1 + b2 + b3` relative to the frame `(s(a), r(e(a)), n(a))`.
#[derive(Clone, Debug)]
pub struct TripleDecomposition<T = f64> {
    pub frame: ProjectionSystem<T>,
    pub b1: PositiveContraction<T>,
    pub b2: PositiveContraction<T>,
    pub b3: PositiveContraction<T>,
    /// Frobenius mass of the off-diagonal blocks of `b` in the frame.
    pub leakage: T,
    /// Definition residual of `b2` against `e(a)`, computed inside the corner `r(e(a))`.
    pub corner_residual: T,
}

impl<T: Real> TripleDecomposition<T> {
    pub fn s(&self) -> &Projection<T> {
        &self.frame.projections()[0]
    }

    pub fn strict_range(&self) -> &Projection<T> {
        &self.frame.projections()[1]
    }

    pub fn n(&self) -> &Projection<T> {
        &self.frame.projections()[2]
    }

    /// `‖b1 + b2 + b3 − b‖_F`.
    pub fn reassembly_residual(&self, b: &PositiveContraction<T>) -> T {
        let sum = &(self.b1.matrix() + self.b2.matrix()) + self.b3.matrix();
        (&sum - b.matrix()).frobenius_norm()
    }
}

fn compress_to_contraction<T: Real>(
    x: &ComplexMatrix<T>,
    p: &Projection<T>,
    pol: &TolerancePolicy<T>,
) -> Result<PositiveContraction<T>> {
    let c = &(p.matrix() * x) * p.matrix();
    PositiveContraction::from_matrix(c.hermitian_part(), pol)
}

fn frame_split<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<TripleDecomposition<T>> {
    a.matrix().ensure_same_shape(b.matrix())?;
    let frame = a.projection_system(pol)?;
    let leakage = frame.block_decompose(b.matrix())?.off_diagonal_leak();
    let [s, r, n] = [0, 1, 2].map(|i| frame.projections()[i].clone());
    let b1 = compress_to_contraction(b.matrix(), &s, pol)?;
    let b2 = compress_to_contraction(b.matrix(), &r, pol)?;
    let b3 = compress_to_contraction(b.matrix(), &n, pol)?;

    let corner = Corner::of(&r)?;
    let corner_residual = if corner.dim() == 0 {
        T::zero()
    } else {
        let e = corner.compress(&a.almost_strict_part(pol));
        let b2c = corner.compress(&b2);
        definition_residual(e.hermitian(), b2c.hermitian())?
    };
    Ok(TripleDecomposition { frame, b1, b2, b3, leakage, corner_residual })
}

/// Splits `b` along the frame of `a` for a compatible pair.
///
/// Components are obtained by compression; the off-diagonal blocks, which
/// vanish for compatible pairs, are measured and reported as an error when
/// they exceed `eq_tol`.
pub fn decompose_triple<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<TripleDecomposition<T>> {
    let residual = definition_residual(a.hermitian(), b.hermitian())?;
    if residual > pol.eq_tol {
        return Err(Error::NotCompatible { residual: residual.as_f64() });
    }
    let t = frame_split(a, b, pol)?;
    if t.leakage > pol.eq_tol {
        return Err(Error::OffDiagonalLeak { residual: t.leakage.as_f64() });
    }
    Ok(t)
}

/// Frame decomposition for a commuting pair; `b2` then commutes with `e(a)`.
pub fn decompose_commuting<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<TripleDecomposition<T>> {
    a.matrix().ensure_same_shape(b.matrix())?;
    let comm = a.matrix().commutator_norm(b.matrix());
    if comm > pol.eq_tol {
        return Err(Error::NotCommuting { residual: comm.as_f64() });
    }
    let t = frame_split(a, b, pol)?;
    if t.leakage > pol.eq_tol {
        return Err(Error::OffDiagonalLeak { residual: t.leakage.as_f64() });
    }
    let e = a.almost_strict_part(pol);
    let c = e.matrix().commutator_norm(t.b2.matrix());
    if c > pol.eq_tol {
        return Err(Error::NotCommuting { residual: c.as_f64() });
    }
    Ok(t)
}

/// The five-projection refinement `s(a), s(b2), r(e(b2)), n1(b2), n(a)` with
/// `a = s(a) + a1 + a2 + a3` and `b = b1 + s(b2) + e(b2) + b3`.
#[derive(Clone, Debug)]
pub struct FiveFoldDecomposition<T = f64> {
    pub triple: TripleDecomposition<T>,
    pub s_a: Projection<T>,
    pub s_b2: Projection<T>,
    pub r_e_b2: Projection<T>,
    /// `n1(b2) = r(e(a)) − s(b2) − r(e(b2))`.
    pub n1_b2: Projection<T>,
    pub n_a: Projection<T>,
    pub a1: PositiveContraction<T>,
    pub a2: PositiveContraction<T>,
    pub a3: PositiveContraction<T>,
    pub b1: PositiveContraction<T>,
    pub b3: PositiveContraction<T>,
    pub e_b2: PositiveContraction<T>,
    /// Definition residual of `a2` against `e(b2)` inside the corner `r(e(b2))`.
    pub inner_residual: T,
}

impl<T: Real> FiveFoldDecomposition<T> {
    pub fn projections(&self) -> [&Projection<T>; 5] {
        [&self.s_a, &self.s_b2, &self.r_e_b2, &self.n1_b2, &self.n_a]
    }

    /// Largest pairwise product norm and the defect of the sum from the identity.
    pub fn frame_residuals(&self) -> (T, T) {
        let ps = self.projections();
        let n = self.s_a.n();
        let mut worst = T::zero();
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, p) in ps.iter().enumerate() {
            for q in ps.iter().skip(i + 1) {
                worst = worst.max((p.matrix() * q.matrix()).frobenius_norm());
            }
            sum = &sum + p.matrix();
        }
        (worst, (&sum - &ComplexMatrix::identity(n)).frobenius_norm())
    }

    /// `‖s(a) + a1 + a2 + a3 − a‖_F` and `‖b1 + s(b2) + e(b2) + b3 − b‖_F`.
    pub fn reassembly_residuals(&self, a: &PositiveContraction<T>, b: &PositiveContraction<T>) -> (T, T) {
        let ra = [self.s_a.matrix(), self.a1.matrix(), self.a2.matrix(), self.a3.matrix()];
        let rb = [self.b1.matrix(), self.s_b2.matrix(), self.e_b2.matrix(), self.b3.matrix()];
        let sa = ComplexMatrix::sum(ra).expect("non-empty");
        let sb = ComplexMatrix::sum(rb).expect("non-empty");
        ((&sa - a.matrix()).frobenius_norm(), (&sb - b.matrix()).frobenius_norm())
    }

    /// `e(b2) = 0`, the commuting case.
    pub fn e_b2_vanishes(&self) -> bool {
        self.r_e_b2.is_zero()
    }
}

pub fn refine_decomposition<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<FiveFoldDecomposition<T>> {
    let triple = decompose_triple(a, b, pol)?;
    let n = a.n();
    let corner = Corner::of(triple.strict_range())?;
    let m = corner.dim();
    let e = a.almost_strict_part(pol);

    let zero_n = || PositiveContraction::zeros(n);
    let (s_b2, r_e_b2, n1_b2, a1, a2, a3, e_b2, inner_residual) = if m == 0 {
        let z = Projection::zeros(n);
        (z.clone(), z.clone(), z, zero_n(), zero_n(), zero_n(), zero_n(), T::zero())
    } else {
        let b2c = corner.compress(&triple.b2);
        let classes = b2c.classes(pol);
        let v = corner.basis();
        let cols = |idx: &[usize]| v * &b2c.eigen().vectors.select_columns(idx);
        let s_b2 = Projection::from_basis(&cols(&classes.one));
        let r_e_b2 = Projection::from_basis(&cols(&classes.strict));
        let n1_b2 = Projection::from_basis(&cols(&classes.zero));
        let piece = |p: &Projection<T>| compress_to_contraction(e.matrix(), p, pol);
        let (a1, a2, a3) = (piece(&s_b2)?, piece(&r_e_b2)?, piece(&n1_b2)?);
        let e_b2 = corner.embed(&b2c.almost_strict_part(pol));

        let inner = if classes.strict.is_empty() {
            T::zero()
        } else {
            let inner_corner = Corner::from_basis(cols(&classes.strict));
            let a2c = inner_corner.compress(&a2);
            let eb2c = inner_corner.compress(&e_b2);
            definition_residual(a2c.hermitian(), eb2c.hermitian())?
        };
        (s_b2, r_e_b2, n1_b2, a1, a2, a3, e_b2, inner)
    };

    Ok(FiveFoldDecomposition {
        s_a: triple.s().clone(),
        n_a: triple.n().clone(),
        b1: triple.b1.clone(),
        b3: triple.b3.clone(),
        triple,
        s_b2,
        r_e_b2,
        n1_b2,
        a1,
        a2,
        a3,
        e_b2,
        inner_residual,
    })
}

/// For a compatible pair, `ab = ba` exactly when `e(b2)` vanishes.
pub fn commutes_within_compat<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<bool> {
    if !is_abs_compatible(a, b, pol)? {
        let residual = definition_residual(a.hermitian(), b.hermitian())?;
        return Err(Error::NotCompatible { residual: residual.as_f64() });
    }
    Ok(refine_decomposition(a, b, pol)?.e_b2_vanishes())
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn pol() -> TolerancePolicy<f64> {
        TolerancePolicy::default()
    }

    fn pc(rows: &[&[f64]]) -> PositiveContraction<f64> {
        PositiveContraction::from_real(rows, &pol()).unwrap()
    }

    fn partner_pair() -> (PositiveContraction<f64>, PositiveContraction<f64>) {
        (pc(&[&[0.5, 0.25], &[0.25, 0.5]]), pc(&[&[0.125, -0.25], &[-0.25, 0.875]]))
    }

    fn close(x: &M, y: &M) -> bool {
        (x - y).frobenius_norm() < 1e-12
    }

    #[test]
    fn triple_split_of_diagonal_pair() {
        let a = PositiveContraction::diag(&[1.0, 0.4, 0.0]);
        for p in [0.0, 1.0] {
            let b = PositiveContraction::diag(&[0.2, p, 0.9]);
            let t = decompose_triple(&a, &b, &pol()).unwrap();
            assert!(close(t.b1.matrix(), &M::diag(&[0.2, 0.0, 0.0])));
            assert!(close(t.b2.matrix(), &M::diag(&[0.0, p, 0.0])));
            assert!(close(t.b3.matrix(), &M::diag(&[0.0, 0.0, 0.9])));
            assert!(t.corner_residual < 1e-14);
        }
    }

    #[test]
    fn strict_partner_lives_in_middle_slot() {
        let (a, b) = partner_pair();
        let t = decompose_triple(&a, &b, &pol()).unwrap();
        assert!(t.b1.matrix().frobenius_norm() < 1e-15);
        assert!(t.b3.matrix().frobenius_norm() < 1e-15);
        assert!(close(t.b2.matrix(), b.matrix()));
    }

    #[test]
    fn incompatible_pair_is_rejected() {
        let h = PositiveContraction::diag(&[0.5, 0.5]);
        assert!(matches!(decompose_triple(&h, &h, &pol()), Err(Error::NotCompatible { .. })));
    }

    #[test]
    fn commuting_slices() {
        let a = PositiveContraction::diag(&[1.0, 0.4]);
        let b = PositiveContraction::diag(&[0.2, 0.6]);
        let t = decompose_commuting(&a, &b, &pol()).unwrap();
        assert!(close(t.b1.matrix(), &M::diag(&[0.2, 0.0])));
        assert!(close(t.b2.matrix(), &M::diag(&[0.0, 0.6])));
        assert!(t.b3.matrix().frobenius_norm() < 1e-15);
        let (x, y) = partner_pair();
        assert!(matches!(decompose_commuting(&x, &y, &pol()), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn refinement_of_complementary_projections() {
        let p = pc(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let f = refine_decomposition(&p, &p.complement(), &pol()).unwrap();
        assert!(close(f.s_a.matrix(), p.matrix()));
        assert!(close(f.n_a.matrix(), p.complement().matrix()));
        assert!(f.s_b2.is_zero() && f.r_e_b2.is_zero() && f.n1_b2.is_zero());
    }

    #[test]
    fn refinement_of_strict_partner_pair() {
        let (a, b) = partner_pair();
        let f = refine_decomposition(&a, &b, &pol()).unwrap();
        assert!(f.s_b2.is_zero() && f.n1_b2.is_zero());
        assert_eq!(f.r_e_b2.rank(), 2);
        assert!(close(f.a2.matrix(), a.matrix()));
        assert!(close(f.e_b2.matrix(), b.matrix()));
        assert!(f.inner_residual < 1e-14);
        let (ra, rb) = f.reassembly_residuals(&a, &b);
        assert!(ra < 1e-12 && rb < 1e-12);
        assert!(!commutes_within_compat(&a, &b, &pol()).unwrap());
    }

    #[test]
    fn commuting_pair_has_no_strict_part_in_b2() {
        let a = PositiveContraction::diag(&[1.0, 0.4, 0.0]);
        let b = PositiveContraction::diag(&[0.2, 1.0, 0.9]);
        let f = refine_decomposition(&a, &b, &pol()).unwrap();
        assert!(f.e_b2_vanishes());
        let (w, d) = f.frame_residuals();
        assert!(w < 1e-14 && d < 1e-14);
        assert!(commutes_within_compat(&a, &b, &pol()).unwrap());
        let p = pc(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(commutes_within_compat(&p, &p.complement(), &pol()).unwrap());
    }
}
