//! Dense complex matrices, Hermitian eigendecomposition and functional calculus.

mod eigen;
mod funcs;
mod hermitian;
mod matrix;
mod tolerance;

pub use eigen::{hermitian_eig, EigenSystem};
pub use funcs::{abs_value, approx_eq, jordan, spectral_apply, spectral_apply_with};
pub use hermitian::Hermitian;
pub use matrix::ComplexMatrix;
pub use tolerance::TolerancePolicy;
