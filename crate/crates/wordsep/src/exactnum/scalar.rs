use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact arbitrary-precision rational scalar. Always stored in lowest terms
/// with a positive denominator (guaranteed by `num-rational`).
pub type Rational = BigRational;

/// 64-bit complex float scalar. Machines reject non-finite entries at
/// construction.
pub type ComplexFloat = Complex64;

/// A scalar a machine can run over.
///
/// `Real` is the type of acceptance probabilities and squared magnitudes:
/// exact rationals stay rational, complex floats collapse to `f64`. `EXACT`
/// selects between bit-exact comparisons and tolerance-based ones wherever
/// both make sense.
pub trait Scalar:
    Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> + Sub<Output = Self> + Send + Sync + 'static
{
    type Real: Clone
        + PartialEq
        + PartialOrd
        + Debug
        + Add<Output = Self::Real>
        + Send
        + Sync
        + 'static;

    /// Whether comparisons on this backend are bit-exact.
    const EXACT: bool;

    /// Backend name used in reports and serialized machines.
    const BACKEND: &'static str;

    /// Complex conjugate; identity on real backends.
    fn conjugate(&self) -> Self;

    /// Squared magnitude, `|x|^2`, as a real value of the backend.
    fn abs_sq(&self) -> Self::Real;

    /// Magnitude as an `f64`, for tolerance checks on inexact backends.
    fn abs_f64(&self) -> f64;

    /// Whether the value is finite (always true on the exact backend).
    fn is_finite(&self) -> bool;

    fn real_zero() -> Self::Real;
    fn real_one() -> Self::Real;

    /// `|r - 1| <= tol` under the backend's exactness rule.
    fn real_is_one(r: &Self::Real, tol: f64) -> bool;

    /// `|r| <= tol` under the backend's exactness rule.
    fn real_is_zero(r: &Self::Real, tol: f64) -> bool;

    /// `r <= bound` where `bound` is an exact rational. Exact backends
    /// compare exactly; floats compare against `bound` rounded to `f64`.
    fn real_leq(r: &Self::Real, bound: &BigRational) -> bool;

    /// Strict nonzero test: exact backends test `r != 0`, floats require
    /// `r > min` to keep a margin above accumulated rounding error.
    fn real_is_nonzero(r: &Self::Real, min: f64) -> bool;

    /// Human/JSON rendering of a real value ("p/q" or a float).
    fn real_to_string(r: &Self::Real) -> String;

    /// Real value as f64 (lossy on the exact backend; for display/sorting).
    fn real_to_f64(r: &Self::Real) -> f64;

    /// JSON rendering of one scalar entry: a fraction string for rationals,
    /// a `[re, im]` pair for complex floats.
    fn entry_json(&self) -> serde_json::Value;
}

impl Scalar for Rational {
    type Real = BigRational;

    const EXACT: bool = true;
    const BACKEND: &'static str = "rational";

    fn conjugate(&self) -> Self {
        self.clone()
    }

    fn abs_sq(&self) -> BigRational {
        self * self
    }

    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn real_zero() -> BigRational {
        BigRational::zero()
    }

    fn real_one() -> BigRational {
        BigRational::one()
    }

    fn real_is_one(r: &BigRational, _tol: f64) -> bool {
        r.is_one()
    }

    fn real_is_zero(r: &BigRational, _tol: f64) -> bool {
        r.is_zero()
    }

    fn real_leq(r: &BigRational, bound: &BigRational) -> bool {
        r <= bound
    }

    fn real_is_nonzero(r: &BigRational, _min: f64) -> bool {
        !r.is_zero()
    }

    fn real_to_string(r: &BigRational) -> String {
        r.to_string()
    }

    fn real_to_f64(r: &BigRational) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn entry_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }
}

impl Scalar for ComplexFloat {
    type Real = f64;

    const EXACT: bool = false;
    const BACKEND: &'static str = "complex";

    fn conjugate(&self) -> Self {
        self.conj()
    }

    fn abs_sq(&self) -> f64 {
        self.norm_sqr()
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn real_zero() -> f64 {
        0.0
    }

    fn real_one() -> f64 {
        1.0
    }

    fn real_is_one(r: &f64, tol: f64) -> bool {
        (r - 1.0).abs() <= tol
    }

    fn real_is_zero(r: &f64, tol: f64) -> bool {
        r.abs() <= tol
    }

    fn real_leq(r: &f64, bound: &BigRational) -> bool {
        *r <= bound.to_f64().unwrap_or(f64::NAN)
    }

    fn real_is_nonzero(r: &f64, min: f64) -> bool {
        *r > min
    }

    fn real_to_string(r: &f64) -> String {
        format!("{r}")
    }

    fn real_to_f64(r: &f64) -> f64 {
        *r
    }

    fn entry_json(&self) -> serde_json::Value {
        serde_json::json!([self.re, self.im])
    }
}

/// Parse an exact rational from "p/q" or plain integer form.
pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().ok()?;
            let den: BigInt = den.trim().parse().ok()?;
            if den.is_zero() {
                return None;
            }
            Some(BigRational::new(num, den))
        }
        None => {
            let n: BigInt = s.trim().parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}
