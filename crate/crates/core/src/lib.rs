//! Scattering matrices, sojourn times and sojourn vectors for the modular
//! surface `SL(2,Z)\H` and the rank-two space `SL(3,Z)\SL(3,R)/SO(3)`.
//!
//! The crate is split along the lines of the computation:
//!
//! - [`exactlin`]: exact unimodular matrices, Bruhat decomposition and
//!   sojourn vectors.
//! - [`specfun`]: complex Gamma, Riemann zeta, the completed zeta and the
//!   horocyclic integral factor.
//! - [`scatmat`]: rank-one and rank-two scattering matrices and the
//!   Eisenstein constant-term check.
//! - [`geodesics`]: scattering-geodesic classes on the modular surface and
//!   the sojourn-time Dirichlet series.
//! - [`poisson`]: sampling `C(1/2+ir)`, windowed FFTs and peak detection.
//! - [`chambers`]: the `A2` root datum, Weyl action and reduction theory.

pub mod chambers;
pub mod error;
pub mod exactlin;
pub mod geodesics;
pub mod poisson;
pub mod scatmat;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
