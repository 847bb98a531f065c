pub mod error;
pub mod generators;
pub mod linalg;
pub mod bloch2;
pub mod blockdecomp;
pub mod compat;
pub mod order;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Contraction = order::PositiveContraction<f64>;
pub type Contraction32 = order::PositiveContraction<f32>;
pub type Tolerances = linalg::TolerancePolicy<f64>;
pub type Tolerances32 = linalg::TolerancePolicy<f32>;
pub type Point = bloch2::BlochPoint<f64>;
