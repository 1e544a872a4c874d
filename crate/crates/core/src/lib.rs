//! Recovery of sparse polynomials over Z_{p^k} from most-significant-bit
//! approximations of their values at random unit points.
//!
//! The crate has three layers:
//!
//! * arithmetic: [`ring`] (prime-power residue rings), [`poly`] (sparse
//!   polynomials and the binomial-coefficient determinant controlling
//!   p-adic independence of the monomials), [`exact`] (exact comparisons
//!   against real powers like `q / 2^(l+1)` for rational `l`);
//! * the recovery pipeline: [`oracle`] (MSB oracle simulation and
//!   instance generation), [`lattice`] (exact LLL reduction, Babai
//!   nearest-plane and exact CVP enumeration), [`recovery`] (end-to-end
//!   coefficient recovery with verification);
//! * [`verify`]: brute-force congruence counts, exponential sums and
//!   discrepancy sweeps used as independent cross-checks at small moduli.
//!
//! Lattice algorithms are generic over the integer scalar (see
//! [`scalar::Scalar`]); the rest of the crate works over the
//! arbitrary-precision aliases [`Int`] and [`Rat`] since moduli are
//! routinely hundreds of bits.

pub mod error;
pub mod exact;
pub mod lattice;
pub mod oracle;
pub mod poly;
pub mod recovery;
pub mod ring;
pub mod scalar;
pub mod verify;

/// Arbitrary-precision signed integer used throughout the crate.
pub type Int = num_bigint::BigInt;
/// Exact rational built on [`Int`]; carries non-integral bit counts and
/// exact distance bookkeeping.
pub type Rat = num_rational::BigRational;

pub use error::Error;
pub use lattice::{CvpSolution, IntegerMatrix, ScaledLattice};
pub use oracle::{MsbInstance, MsbSample, NoisePolicy};
pub use poly::{ConditionReport, ExponentSet, SparsePoly};
pub use recovery::{RecoveryResult, Solver};
pub use ring::RingModulus;

/// Result alias over the crate error type.
pub type Result<T> = std::result::Result<T, Error>;
