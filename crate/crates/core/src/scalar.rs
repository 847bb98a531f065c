use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar underlying every complex matrix in the crate (`f32` or `f64`).
///
/// The associated constants carry the default tolerance policy for the
/// precision; `f32` defaults are loosened to stay above its machine epsilon.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    const DEFAULT_EIG_TOL: f64;
    const DEFAULT_EQ_TOL: f64;
    const DEFAULT_RANK_TOL: f64;
    /// Off-diagonal Frobenius mass, relative to the input norm, at which a
    /// Jacobi sweep is considered converged.
    const JACOBI_REL_TOL: f64;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const DEFAULT_EIG_TOL: f64 = 1e-12;
    const DEFAULT_EQ_TOL: f64 = 1e-9;
    const DEFAULT_RANK_TOL: f64 = 1e-10;
    const JACOBI_REL_TOL: f64 = 1e-14;
}

impl Real for f32 {
    const DEFAULT_EIG_TOL: f64 = 1e-5;
    const DEFAULT_EQ_TOL: f64 = 1e-4;
    const DEFAULT_RANK_TOL: f64 = 1e-4;
    const JACOBI_REL_TOL: f64 = 1e-6;
}
