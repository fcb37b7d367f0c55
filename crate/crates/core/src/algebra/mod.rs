//! Exact arithmetic: big rationals, univariate polynomials over Q, square and
//! square-free machinery, and characteristic polynomials.

mod charpoly;
mod poly;

pub use charpoly::{char_poly, char_poly_coeffs, CharPolyScalar};
pub use poly::RatPoly;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with positive denominator.
pub type BigRat = num_rational::BigRational;

/// Floor square root of a nonnegative integer and whether it is exact.
pub fn int_sqrt(n: &BigInt) -> Result<(BigInt, bool)> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt(n.to_string()));
    }
    let root = n.sqrt();
    let exact = &root * &root == *n;
    Ok((root, exact))
}

/// True iff `n` is the square of an integer. Negative numbers are never squares.
pub fn is_square_integer(n: &BigInt) -> bool {
    int_sqrt(n).map(|(_, exact)| exact).unwrap_or(false)
}

/// True iff `q` is the square of a rational number.
///
/// `q` is in lowest terms, so this holds exactly when numerator and denominator
/// are both perfect squares.
pub fn is_square_rational(q: &BigRat) -> bool {
    if q.is_zero() {
        return true;
    }
    !q.is_negative() && is_square_integer(q.numer()) && is_square_integer(q.denom())
}

/// Rational from an integer.
pub fn rat(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

/// Rational `n / d`. Panics if `d == 0`.
pub fn ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRat {
    BigRat::new(n.into(), d.into())
}
