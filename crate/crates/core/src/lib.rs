//! Exact computations with toric 1-motives over ℚ.
//!
//! A toric 1-motive is a two-term complex `M = [u: ℤʳ → 𝔾ₘᵈ]`, given in
//! practice by a `d×r` matrix of nonzero rationals. This crate computes,
//! in exact arithmetic throughout:
//!
//! * Cartier duals and morphisms of motives ([`motive`]),
//! * universal extensions and de Rham realizations ([`universal`]),
//! * the canonical connection on the Poincaré biextension, obtained by
//!   solving the horizontality and trivialization constraints symbolically,
//!   and the induced pairing on de Rham realizations together with
//!   perfectness and weight certificates ([`biext`]),
//! * Hom, Ext and Ext♮ groups of a motive by the multiplicative group,
//!   with machine-verified exact sequences ([`extgroups`]).
//!
//! Everything is built on exact integer lattice algebra ([`zlinalg`]),
//! the multiplicative group of ℚ in factored form ([`ratmult`]) and a
//! small symbolic calculus of differential forms with Laurent-polynomial
//! coefficients ([`symforms`]).
//!
//! All values are immutable after construction and all operations are
//! pure, so everything here is safe to use concurrently.

pub mod biext;
mod error;
pub mod extgroups;
pub mod matrix;
pub mod motive;
pub mod ratmult;
pub mod rng;
mod scalar;
pub mod symforms;
pub mod universal;
pub mod verify;
pub mod zlinalg;

pub use error::{Error, Result, SolveFailure};
pub use scalar::Scalar;

/// Arbitrary-precision integer scalar.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational scalar.
pub type Rat = num_rational::BigRational;

/// Matrix over ℤ.
pub type IntMatrix = matrix::Matrix<Int>;
/// Matrix over ℚ.
pub type RatMatrix = matrix::Matrix<Rat>;

/// Shorthand for `Int::from`.
pub fn int(n: i64) -> Int {
    Int::from(n)
}

/// Shorthand for building an exact rational from an integer pair.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(Int::from(numer), Int::from(denom))
}
