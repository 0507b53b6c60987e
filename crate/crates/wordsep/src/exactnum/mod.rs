//! Scalar backends and small dense linear algebra shared by all engines.
//!
//! Two backends are supported: exact arbitrary-precision rationals
//! ([`Rational`]) for the affine machines and the orthogonal-generator
//! quantum machines, and 64-bit complex floats ([`ComplexFloat`]) for
//! machines with irrational amplitudes. Everything is immutable after
//! construction and safe to share between parallel workers.

mod linalg;
mod scalar;

pub use linalg::{Matrix, Vector};
pub use scalar::{parse_rational, ComplexFloat, Rational, Scalar};

use num_bigint::BigInt;

/// Shorthand for building a rational from an integer numerator/denominator.
///
/// Panics when `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a big integer.
pub fn rat_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}
