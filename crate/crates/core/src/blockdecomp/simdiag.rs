use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, Hermitian, TolerancePolicy};
use crate::scalar::Real;

/// Relative gap separating eigenvalue clusters.
const CLUSTER_GAP: f64 = 1e-8;

/// A unitary `v` such that `v* m v` is diagonal for every `m` in `ms`.
///
/// Each input must be normal and the inputs must commute pairwise. Normal
/// matrices are split into their two Hermitian parts; the first Hermitian
/// matrix is diagonalized, its eigenvalues grouped into clusters, and every
/// later matrix is compressed to each cluster and refined in turn.
pub fn simultaneous_diagonalize<T: Real>(ms: &[&ComplexMatrix<T>], pol: &TolerancePolicy<T>) -> Result<ComplexMatrix<T>> {
    let Some(first) = ms.first() else {
        return Err(Error::InvalidSystem { reason: "no matrices to diagonalize".into() });
    };
    let n = first.n();
    for m in ms {
        m.ensure_square()?;
        if m.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: m.n() });
        }
        let scale = T::one() + m.frobenius_norm().powi(2);
        let defect = m.normality_defect();
        if defect > pol.eq_tol * scale {
            return Err(Error::NotNormal { residual: defect.as_f64() });
        }
    }
    for (i, x) in ms.iter().enumerate() {
        for y in ms.iter().skip(i + 1) {
            let scale = T::one() + x.frobenius_norm() * y.frobenius_norm();
            let c = x.commutator_norm(y);
            if c > pol.eq_tol * scale {
                return Err(Error::NotCommuting { residual: c.as_f64() });
            }
        }
    }

    let mut hermitians: Vec<Hermitian<T>> = Vec::with_capacity(2 * ms.len());
    for m in ms {
        hermitians.push(Hermitian::symmetrize(m));
        let im = m.skew_hermitian_part_over_i();
        if im.frobenius_norm() > T::zero() {
            hermitians.push(Hermitian::symmetrize(&im));
        }
    }

    let mut blocks = vec![ComplexMatrix::<T>::identity(n)];
    for h in &hermitians {
        let gap = T::lit(CLUSTER_GAP) * T::one().max(h.frobenius_norm());
        let mut next = Vec::with_capacity(blocks.len());
        for basis in &blocks {
            if basis.cols() == 1 {
                next.push(basis.clone());
                continue;
            }
            let es = hermitian_eig(&h.compress(basis))?;
            let rotated = basis * &es.vectors;
            let mut start = 0;
            for i in 1..=es.n() {
                if i == es.n() || es.values[i] - es.values[i - 1] > gap {
                    let idx: Vec<usize> = (start..i).collect();
                    next.push(rotated.select_columns(&idx));
                    start = i;
                }
            }
        }
        blocks = next;
    }

    let mut v = blocks[0].clone();
    for b in &blocks[1..] {
        v = v.hstack(b);
    }
    Ok(v)
}
