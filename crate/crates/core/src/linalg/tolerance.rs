use crate::error::{Error, Result};
use crate::scalar::Real;

/// The three numerical knobs shared by every predicate.
///
/// * `eig_tol`: eigensolver reconstruction and spectral clamping band.
/// * `eq_tol`: matrix equality, residual thresholds, commutation tests.
/// * `rank_tol`: eigenvalue classification band for r(a), s(a), n(a).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TolerancePolicy<T = f64> {
    pub eig_tol: T,
    pub eq_tol: T,
    pub rank_tol: T,
}

impl<T: Real> Default for TolerancePolicy<T> {
    fn default() -> Self {
        Self {
            eig_tol: T::lit(T::DEFAULT_EIG_TOL),
            eq_tol: T::lit(T::DEFAULT_EQ_TOL),
            rank_tol: T::lit(T::DEFAULT_RANK_TOL),
        }
    }
}

impl<T: Real> TolerancePolicy<T> {
    /// Validated constructor; every tolerance must be at least machine epsilon.
    pub fn new(eig_tol: T, eq_tol: T, rank_tol: T) -> Result<Self> {
        let pol = Self { eig_tol, eq_tol, rank_tol };
        pol.validate()?;
        Ok(pol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eig_tol", self.eig_tol), ("eq_tol", self.eq_tol), ("rank_tol", self.rank_tol)] {
            if !v.is_finite() || v < T::epsilon() {
                return Err(Error::InvalidTolerance { name, value: v.as_f64() });
            }
        }
        Ok(())
    }

    pub fn with_eq_tol(mut self, eq_tol: T) -> Result<Self> {
        self.eq_tol = eq_tol;
        self.validate()?;
        Ok(self)
    }

    /// Absolute classification band for an `n x n` matrix of operator norm `norm`.
    pub fn rank_band(&self, n: usize, norm: T) -> T {
        let scale = T::lit(n as f64) * norm;
        self.rank_tol * if scale > T::one() { scale } else { T::one() }
    }
}
