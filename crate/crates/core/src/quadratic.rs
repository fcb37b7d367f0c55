//! Exact arithmetic in a real quadratic field `Q(√D)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{int_sqrt, BigRat};
use crate::error::{Error, Result};

/// The number `p + q√D`.
///
/// When `D` is a perfect square the element is folded into `p` and `q` stays zero,
/// so the representation is canonical in both cases and equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    d: BigInt,
    p: BigRat,
    q: BigRat,
}

impl QuadElem {
    pub fn new(d: impl Into<BigInt>, p: BigRat, q: BigRat) -> Result<Self> {
        let d = d.into();
        if !d.is_positive() {
            return Err(Error::InvalidParams(format!("field datum D = {d} must be positive")));
        }
        let (root, exact) = int_sqrt(&d)?;
        if exact {
            let p = p + q * BigRat::from_integer(root);
            return Ok(Self { d, p, q: BigRat::zero() });
        }
        Ok(Self { d, p, q })
    }

    pub fn rational(d: impl Into<BigInt>, p: BigRat) -> Result<Self> {
        Self::new(d, p, BigRat::zero())
    }

    /// `√D` itself.
    pub fn sqrt_d(d: impl Into<BigInt>) -> Result<Self> {
        Self::new(d, BigRat::zero(), BigRat::one())
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn p(&self) -> &BigRat {
        &self.p
    }

    pub fn q(&self) -> &BigRat {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// `p² − D q²`.
    pub fn norm(&self) -> BigRat {
        &self.p * &self.p - BigRat::from_integer(self.d.clone()) * &self.q * &self.q
    }

    pub fn conjugate(&self) -> Self {
        Self {
            d: self.d.clone(),
            p: self.p.clone(),
            q: -&self.q,
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        Self {
            d: self.d.clone(),
            p: &self.p * c,
            q: &self.q * c,
        }
    }

    pub fn add_rational(&self, c: &BigRat) -> Self {
        Self {
            d: self.d.clone(),
            p: &self.p + c,
            q: self.q.clone(),
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.d.to_string(), other.d.to_string()))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            d: self.d.clone(),
            p: &self.p + &other.p,
            q: &self.q + &other.q,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let d = BigRat::from_integer(self.d.clone());
        Ok(Self {
            d: self.d.clone(),
            p: &self.p * &other.p + d * &self.q * &other.q,
            q: &self.p * &other.q + &self.q * &other.p,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::FieldDivisionByZero(self.d.to_string()));
        }
        Ok(self.conjugate().scale(&n.recip()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.try_mul(&other.inverse()?)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        p + q * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

// Operator forms panic on mismatched fields; the fallible forms are above.
impl Add for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        self.try_add(rhs).expect("same quadratic field")
    }
}

impl Sub for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        self.try_sub(rhs).expect("same quadratic field")
    }
}

impl Mul for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        self.try_mul(rhs).expect("same quadratic field")
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            d: self.d.clone(),
            p: -&self.p,
            q: -&self.q,
        }
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.p, self.q, self.d)
        }
    }
}
