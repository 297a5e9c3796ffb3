//! Multiquadric / inverse multiquadric h-spline interpolation with a fully
//! explicit exponential error bound.

pub mod constants;
pub mod error;
mod gamma;
pub mod kernel;
pub mod logreal;

pub use constants::ConstantSet;
pub use error::{Error, Result};
pub use kernel::KernelParams;
pub use logreal::LogReal;
pub mod interpolant;
pub mod linalg;
pub mod polynomial;

pub use interpolant::Interpolant;
pub mod geometry;
pub mod certify;
pub mod simplex;
pub mod lemma_lab;
pub mod cli;
