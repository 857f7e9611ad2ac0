//! Crate-wide error type.

use rug::{Integer, Rational};

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Zero passed where a non-zero value is required (e.g. `padic_ord`).
    #[error("argument must be non-zero")]
    ZeroArgument,

    /// A modulus or valuation base that is not prime.
    #[error("{0} is not prime")]
    NotPrime(Integer),

    /// Twist parameter rejected at curve construction.
    #[error("m = {0} is not admissible: {1}")]
    InadmissibleM(Integer, &'static str),

    /// Point fails the curve equation it claims to satisfy.
    #[error("point ({x}, {y}) does not satisfy the curve equation for m = {m}")]
    NotOnCurve { m: Integer, x: Rational, y: Rational },

    /// Binary operation on points of two different curves.
    #[error("points lie on different curves")]
    CurveMismatch,

    /// Operation that needs an affine point got the identity.
    #[error("operation undefined at the identity")]
    IdentityPoint,

    /// Operation not defined for this curve family (e.g. addition on the
    /// auxiliary model u'v'(u'+v') = m, which is only carried as a label).
    #[error("operation not supported on this curve family")]
    UnsupportedFamily,

    /// Isogeny evaluated at a kernel point or a pole of its rational map.
    #[error("isogeny undefined at this point")]
    IsogenyUndefined,

    /// Coordinate transform evaluated where it has a pole.
    #[error("transform undefined at this point: {0}")]
    TransformUndefined(&'static str),

    /// Multiplier n = 0, or another index outside an operation's domain.
    #[error("index out of domain: {0}")]
    BadIndex(&'static str),

    /// Height iteration failed to reach the requested tolerance.
    #[error("height computation did not converge: {0}")]
    HeightConvergence(&'static str),

    /// Polynomial operation on inconsistent or degenerate input.
    #[error("bad polynomial input: {0}")]
    BadPolynomial(&'static str),

    /// Embedded or on-disk dataset is missing, malformed or corrupt.
    #[error("dataset error: {0}")]
    Dataset(String),

    /// Malformed numeric literal.
    #[error("cannot parse {0:?} as an exact number")]
    Parse(String),
}
