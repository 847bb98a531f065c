use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, EigenSystem, Hermitian, TolerancePolicy};
use crate::scalar::Real;

/// `V f(D) V*`; fails if `f` is not finite at some eigenvalue.
pub fn spectral_apply<T: Real>(h: &Hermitian<T>, f: impl Fn(T) -> T) -> Result<Hermitian<T>> {
    let es = hermitian_eig(h)?;
    spectral_apply_with(&es, f)
}

/// Same as [`spectral_apply`] but reuses an existing eigensystem.
pub fn spectral_apply_with<T: Real>(es: &EigenSystem<T>, f: impl Fn(T) -> T) -> Result<Hermitian<T>> {
    let mut mapped = Vec::with_capacity(es.n());
    for &l in &es.values {
        let y = f(l);
        if !y.is_finite() {
            return Err(Error::FunctionUndefined { eigenvalue: l.as_f64() });
        }
        mapped.push(y);
    }
    Ok(Hermitian::symmetrize(&ComplexMatrix::diag(&mapped).embed(&es.vectors)))
}

/// `|x| = (x* x)^{1/2}`.
///
/// Hermitian inputs take |λ| on the spectrum of `x` directly; squaring first
/// would lose half the significant digits near zero eigenvalues.
pub fn abs_value<T: Real>(x: &ComplexMatrix<T>) -> Result<Hermitian<T>> {
    x.ensure_square()?;
    let norm = x.frobenius_norm();
    if x.hermitian_defect() <= T::lit(T::JACOBI_REL_TOL) * norm {
        return spectral_apply(&Hermitian::symmetrize(x), |l| l.abs());
    }
    let gram = Hermitian::symmetrize(&(&x.adjoint() * x));
    spectral_apply(&gram, |l| l.max(T::zero()).sqrt())
}

/// Jordan product `(ab + ba) / 2`, bitwise symmetric in its arguments.
pub fn jordan<T: Real>(a: &Hermitian<T>, b: &Hermitian<T>) -> Result<Hermitian<T>> {
    a.ensure_same_shape(b)?;
    let ab = a.matrix() * b.matrix();
    let ba = b.matrix() * a.matrix();
    Ok(Hermitian::symmetrize(&(&ab + &ba).scale(T::half())))
}

/// `‖x − y‖_F ≤ eq_tol·(1 + max(‖x‖_F, ‖y‖_F))`.
pub fn approx_eq<T: Real>(x: &ComplexMatrix<T>, y: &ComplexMatrix<T>, pol: &TolerancePolicy<T>) -> Result<bool> {
    x.ensure_same_shape(y)?;
    let scale = T::one() + x.frobenius_norm().max(y.frobenius_norm());
    Ok((x - y).frobenius_norm() <= pol.eq_tol * scale)
}
