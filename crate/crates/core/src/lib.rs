//! Bargmann-type transforms between L2 spaces and reproducing kernel
//! Hilbert spaces: bases, quadrature, kernels, transforms, operators.

pub mod config;
pub mod error;
pub mod kernels;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
