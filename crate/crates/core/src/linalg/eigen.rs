use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Hermitian};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem<T = f64> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenSystem<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// `V f(D) V*` for an arbitrary real function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(T) -> T) -> Hermitian<T> {
        let mapped: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let d = ComplexMatrix::diag(&mapped);
        Hermitian::symmetrize(&d.embed(&self.vectors))
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue
    /// satisfies `keep`.
    pub fn projector(&self, keep: impl Fn(T) -> bool) -> Hermitian<T> {
        self.apply(|l| if keep(l) { T::one() } else { T::zero() })
    }

    /// Columns of `V` whose eigenvalue satisfies `keep`, as an isometry.
    pub fn basis(&self, keep: impl Fn(T) -> bool) -> ComplexMatrix<T> {
        let idx: Vec<usize> = (0..self.n()).filter(|&i| keep(self.values[i])).collect();
        self.vectors.select_columns(&idx)
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.apply(|l| l).into_matrix()
    }

    pub fn min(&self) -> T {
        self.values.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Largest absolute eigenvalue (the operator norm of the matrix).
    pub fn spectral_radius(&self) -> T {
        self.min().abs().max(self.max().abs())
    }
}

/// Cyclic complex Jacobi eigendecomposition of a Hermitian matrix.
///
/// Sweeps until the off-diagonal Frobenius mass drops below
/// `JACOBI_REL_TOL·‖h‖_F`, at most 100 sweeps.
pub fn hermitian_eig<T: Real>(h: &Hermitian<T>) -> Result<EigenSystem<T>> {
    let n = h.n();
    let mut a = h.matrix().clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let scale = a.frobenius_norm();
    let target = T::lit(T::JACOBI_REL_TOL) * scale;

    let mut sweeps = 0;
    loop {
        let off = a.off_diagonal_norm();
        if off <= target || off == T::zero() {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NotConverged { sweeps, off_diagonal: off.as_f64() });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = a.real_diagonal();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap_or(std::cmp::Ordering::Equal));
    Ok(EigenSystem {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: v.select_columns(&order),
    })
}

fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let n = a.n();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (T::two() * r);
    let t = if tau.abs() > T::lit(1e150) {
        T::one() / (T::two() * tau)
    } else {
        let sign = if tau < T::zero() { -T::one() } else { T::one() };
        sign / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // Rotation acting on columns p, q:
    //   [ c              s              ]
    //   [ -s·conj(ph)    c·conj(ph)     ]
    let cc = Complex::new(c, T::zero());
    let sc = Complex::new(s, T::zero());
    let ph_c = phase.conj();
    let g_pp = cc;
    let g_pq = sc;
    let g_qp = -sc * ph_c;
    let g_qq = cc * ph_c;

    // A <- A G
    for i in 0..n {
        let x = a[(i, p)];
        let y = a[(i, q)];
        a[(i, p)] = x * g_pp + y * g_qp;
        a[(i, q)] = x * g_pq + y * g_qq;
    }
    // A <- G* A
    for j in 0..n {
        let x = a[(p, j)];
        let y = a[(q, j)];
        a[(p, j)] = g_pp.conj() * x + g_qp.conj() * y;
        a[(q, j)] = g_pq.conj() * x + g_qq.conj() * y;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
    a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

    for i in 0..n {
        let x = v[(i, p)];
        let y = v[(i, q)];
        v[(i, p)] = x * g_pp + y * g_qp;
        v[(i, q)] = x * g_pq + y * g_qq;
    }
}
