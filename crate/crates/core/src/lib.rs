//! Exact arithmetic for elliptic divisibility sequences attached to the
//! twisted Fermat cubic U³ + V³ = m.
//!
//! The crate constructs the denominator sequence (Wₙ) of the multiples nR of
//! a rational point R on the cubic, transports points to and from the short
//! Weierstrass model Y² = X³ − 432m², and mechanically checks the arithmetic
//! this sequence satisfies: the cancellation structure of the denominators,
//! strong divisibility, per-prime valuation laws, canonical-height
//! identities, and the homogeneous-polynomial analysis that rules out
//! prime-power terms at small indices.
//!
//! Everything numeric is exact (`rug` integers and rationals); floating
//! point appears only in height computations, which run at 192-bit MPFR
//! precision with explicit convergence bounds.

pub mod arith;
pub mod curve;
pub mod dataset;
pub mod eds;
pub mod heights;
pub mod polytools;
pub mod verify;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
