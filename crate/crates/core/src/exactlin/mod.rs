//! Exact integer and rational linear algebra for `SL(2,Z)` and `SL(3,Z)`.
//!
//! Matrices are held with arbitrary-precision entries; nothing in this module
//! goes through floating point except the final logarithms of
//! [`SojournVector`].

mod bruhat;
mod matrix;
mod permutation;

pub use bruhat::{bruhat_decompose, bruhat_recompose, killing_norm, sojourn_vector, BruhatFactorization, SojournVector};
pub use matrix::{RationalMatrix, UnimodularMatrix};
pub use permutation::Permutation;
