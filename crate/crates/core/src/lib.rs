//! Joint iterative reduced-rank space-time adaptive estimators for DS-CDMA.

pub mod complexity;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod rank;
pub mod scalar;
pub mod signal;

pub use scalar::Real;

use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Vector = linalg::ComplexVector<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Vector32 = linalg::ComplexVector<f32>;
