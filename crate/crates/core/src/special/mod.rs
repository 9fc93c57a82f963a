//! Orthogonal polynomials, hypergeometric series, Gamma helpers and the
//! orthonormal bases built from them.

pub mod basis;
pub mod gamma;
pub mod hyper;
pub mod poly;

pub use basis::BasisFamily;
pub use gamma::{beta, binomial, gamma, log_gamma, pochhammer};
pub use hyper::{hyp_series, hyp_series_complex, HypKind, HypSum};
pub use poly::{hermite, jacobi, laguerre, PolyKind, PolynomialFamily};
