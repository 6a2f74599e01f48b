//! Heat-trace asymptotics of Dirac-type operators under spectral boundary
//! conditions.
//!
//! The crate evaluates the boundary coefficients `a_n^eta` and `a_n^zeta` of
//! the smeared heat traces `Tr{f P e^{-tP^2}}` and `Tr{f e^{-tP^2}}` in three
//! independent ways:
//!
//! * closed-form evaluation of the coefficient formulas ([`theorems`]),
//! * residues of the eta function on the ball extracted from Barnes zeta
//!   functions ([`barnes`], [`asymptotics`]),
//! * brute-force enumeration of the ball spectrum followed by a least-squares
//!   fit of the sampled heat trace ([`ball`], [`asymptotics`]).
//!
//! Numerical code is generic over the floating point type through [`Real`];
//! exact code is generic over the coefficient ring. The aliases below fix
//! the types used throughout the binaries and the test suites.

// `!(x < y)` is deliberate: NaN must fail range checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod ball;
pub mod barnes;
pub mod clifford;
mod error;
pub mod exact;
pub mod poly;
pub mod report;
mod scalar;
pub mod specfun;
pub mod theorems;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

/// Exact rational number.
pub type Q = num_rational::BigRational;
/// Exact Gaussian rational `a + b i`.
pub type GaussQ = num_complex::Complex<Q>;
/// Polynomial with exact rational coefficients.
pub type QPoly = poly::RationalPoly<Q>;
/// Clifford expression with Gaussian-rational coefficients.
pub type CliffordQ = clifford::CliffordExpr<GaussQ>;
/// Explicit gamma-matrix representation with Gaussian-rational entries.
pub type MatrixRepQ = clifford::MatrixRep<GaussQ>;
/// Rational linear combination of powers of `sqrt(pi)`.
pub type PiQ = exact::PiExpr<Q>;
/// Gaussian-rational linear combination of powers of `sqrt(pi)`.
pub type PiGauss = exact::PiExpr<GaussQ>;
/// Ball spectrum in double precision.
pub type BallSpectrum64 = ball::BallSpectrum<f64>;
/// Ball configuration in double precision.
pub type BallConfig64 = ball::BallConfig<f64>;
/// Heat-trace fit in double precision.
pub type AsymptoticFit64 = asymptotics::AsymptoticFit<f64>;
