//! Integer scalar abstraction for the lattice algorithms.
//!
//! LLL, Babai and the CVP enumeration only need exact ring operations,
//! ordering and floor division, so they are written against [`Scalar`]
//! and work for machine integers (`i64`, `i128`) in tests as well as
//! [`crate::Int`] in the recovery pipeline. Rational working values are
//! `num_rational::Ratio<S>`.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{NumAssign, NumOps, Signed};

/// Value-level and reference-level arithmetic ops of the scalar.
pub trait ScalarOps<T>: NumOps<T, T> {}
impl<T, U> ScalarOps<T> for U where U: NumOps<T, T> {}

/// Exact integer scalar of a lattice.
pub trait Scalar: Integer + Signed + NumAssign + Clone + Debug + Display
where
    for<'a> &'a Self: ScalarOps<Self>,
{
}

impl<T> Scalar for T
where
    T: Integer + Signed + NumAssign + Clone + Debug + Display,
    for<'a> &'a T: ScalarOps<T>,
{
}

/// Nearest integer to `num/den` for `den > 0`, ties rounded up.
pub fn round_div<S>(num: &S, den: &S) -> S
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    let two = S::one() + S::one();
    let doubled = &(num * &two) + den;
    doubled.div_floor(&(den * &two))
}
