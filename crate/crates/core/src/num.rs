//! Scalar abstraction for the exact linear algebra kernel.
//!
//! Everything downstream of [`crate::lattice`] is written against [`IntScalar`],
//! so the kernel runs unchanged over machine integers or arbitrary precision.
//! The crate-root aliases [`crate::Int`] / [`crate::Rat`] pick `BigInt`, which is
//! what every built-in scenario uses: all quantities here are lattice identities
//! and must never round.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed};

/// An exact signed integer scalar: ring ops, Euclidean gcd, total order.
pub trait IntScalar:
    Integer + Signed + FromPrimitive + Clone + Hash + Debug + Display + Send + Sync + 'static
{
    fn of_i64(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("i64 fits in any IntScalar")
    }
}

impl<T> IntScalar for T where
    T: Integer + Signed + FromPrimitive + Clone + Hash + Debug + Display + Send + Sync + 'static
{
}

/// Exact rational built over an [`IntScalar`]. `num_rational` keeps values
/// reduced with a positive denominator, which is the representation invariant
/// the rest of the crate relies on.
pub type RatioOf<T> = Ratio<T>;

pub fn rat_from_int<T: IntScalar>(v: T) -> RatioOf<T> {
    Ratio::from_integer(v)
}

pub fn rat_i64<T: IntScalar>(num: i64, den: i64) -> RatioOf<T> {
    assert!(den != 0, "zero denominator");
    Ratio::new(T::of_i64(num), T::of_i64(den))
}
