//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    #[error("p-adic order undefined for zero")]
    ZeroOrder,

    #[error("invalid exponent set: {0}")]
    InvalidExponents(String),

    #[error("invalid polynomial: {0}")]
    InvalidPoly(String),

    #[error("epsilon too large for sparsity: eps must satisfy 0 < eps < 1/(s+1)")]
    EpsilonTooLarge,

    #[error("instance must contain at least one sample")]
    EmptyInstance,

    #[error("evaluation point {0} is not a unit of the ring")]
    NonUnitPoint(String),

    #[error("basis rows are linearly dependent")]
    SingularBasis,

    #[error("dimension {dim} exceeds exact enumeration limit {limit}; use the Babai solver")]
    DimensionLimit { dim: usize, limit: usize },

    #[error("modulus {0} exceeds the brute-force limit {1}")]
    BruteForceLimit(String, String),

    #[error("candidate exponents do not match instance exponents")]
    ExponentMismatch,

    #[error("window length {h} exceeds q/D = {max}")]
    WindowTooLarge { h: String, max: String },

    #[error("malformed instance data: {0}")]
    MalformedInstance(String),
}
