//! Exact combinatorics of one-parameter degenerations: toric fans and their
//! intersection theory, normal-bundle fans with their divisor calculus,
//! weighted dual complexes, singular integral affine structures with their
//! monodromy representations, and evaluable piecewise retraction maps.
//!
//! Everything is computed in exact arithmetic over [`Int`] / [`Rat`]; the
//! linear algebra kernel in [`lattice`] is generic over the scalar through
//! [`num::IntScalar`].

pub mod affine_monodromy;
pub mod complexes;
pub mod fan;
pub mod lattice;
pub mod normal_bundle;
pub mod num;
pub mod pl_retractions;
pub mod report;
pub mod scenarios;
pub mod spec_doc;

/// Arbitrary-precision integer used by all built-in scenarios.
pub type Int = num_bigint::BigInt;
/// Exact rational over [`Int`], reduced with positive denominator.
pub type Rat = num_rational::Ratio<Int>;

pub type IVec = lattice::IntVec<Int>;
pub type RVec = lattice::RatVec<Int>;
pub type IMat = lattice::IntMat<Int>;
pub type RMat = lattice::RatMat<Int>;

/// Shorthand for an exact rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(Int::from(num), Int::from(den))
}

/// Shorthand for an exact integer as a rational.
pub fn ratio_int(v: i64) -> Rat {
    Rat::from(Int::from(v))
}
