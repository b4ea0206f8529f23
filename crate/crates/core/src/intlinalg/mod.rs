//! Exact integer matrix algebra.
//!
//! Everything in this crate bottoms out here: Smith normal forms for
//! quotient groups, integer kernels for preimages, and saturation for the
//! sublattices `Span σ ∩ N`. Entries are arbitrary precision; nothing is ever
//! rounded.

mod lattice;
mod matrix;
mod snf;

pub use lattice::{
    complement_basis, hnf_rows, kernel_basis, lattice_basis, primitive, rank, saturate, solve_integer, solve_rational,
    unimodular_inverse,
};
pub use matrix::{IntMatrix, IntVector};
pub use snf::{smith_normal_form, Snf};

use num_bigint::BigInt;

/// Builds an integer vector from machine integers.
pub fn ivec(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Dot product of two integer vectors of equal length.
pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
