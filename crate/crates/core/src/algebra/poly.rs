use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{is_square_rational, BigRat};
use crate::error::{Error, Result};

/// Univariate polynomial with rational coefficients.
///
/// `coeffs[i]` is the coefficient of `x^i`; trailing zeros are never stored, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![BigRat::zero(), BigRat::one()])
    }

    pub fn constant(c: BigRat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRat::from_integer(c.into())).collect())
    }

    /// `c * x^deg`.
    pub fn monomial(c: BigRat, deg: usize) -> Self {
        let mut coeffs = vec![BigRat::zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(coeffs)
    }

    /// Product of `(x - r)` over the given roots.
    pub fn from_roots(roots: &[BigRat]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc * Self::from_coeffs(vec![-r.clone(), BigRat::one()])
        })
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRat {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigRat> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &RatPoly) -> RatPoly {
        self.coeffs.iter().rev().fold(RatPoly::zero(), |acc, c| {
            &(&acc * other) + &RatPoly::constant(c.clone())
        })
    }

    pub fn derivative(&self) -> RatPoly {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigRat) -> RatPoly {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> RatPoly {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, mut e: u32) -> RatPoly {
        let mut base = self.clone();
        let mut acc = RatPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((RatPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigRat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Quotient of a division known to be exact; `None` when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &RatPoly) -> Result<Option<RatPoly>> {
        let (q, r) = self.div_rem(divisor)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> Result<RatPoly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Yun's square-free decomposition: returns monic, pairwise coprime, square-free
    /// `a_1, ..., a_k` with `monic(self) = a_1 * a_2^2 * ... * a_k^k`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<RatPoly>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let a0 = f.gcd(&df)?;
        let mut b = exact(&f, &a0)?;
        let c = exact(&df, &a0)?;
        let mut d = &c - &b.derivative();
        let mut factors = Vec::new();
        while !b.is_constant() {
            let a = b.gcd(&d)?;
            let next_b = exact(&b, &a)?;
            let next_c = exact(&d, &a)?;
            d = &next_c - &next_b.derivative();
            b = next_b;
            factors.push(a);
        }
        Ok(factors)
    }

    /// Monic product of the irreducible factors occurring with odd multiplicity.
    pub fn squarefree_reduction(&self) -> Result<RatPoly> {
        Ok(self
            .squarefree_decomposition()?
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .fold(RatPoly::one(), |acc, (_, a)| &acc * &a))
    }

    /// True iff `gcd(self, self')` is constant.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.gcd(&self.derivative())
            .map(|g| g.is_constant())
            .unwrap_or(false)
    }

    /// Square root in `Q[x]`, if `self` is the square of a polynomial.
    ///
    /// Computed by matching coefficients from the top degree down, which does not
    /// go through any gcd computation.
    pub fn sqrt(&self) -> Option<RatPoly> {
        let Some(deg) = self.degree() else {
            return Some(RatPoly::zero());
        };
        if deg % 2 == 1 {
            return None;
        }
        let lc = &self.coeffs[deg];
        if !is_square_rational(lc) {
            return None;
        }
        let half = deg / 2;
        let lead = BigRat::new(lc.numer().sqrt(), lc.denom().sqrt());
        let two_lead_inv = (&lead + &lead).recip();
        // root[half - k] from the coefficient of x^(deg - k)
        let mut root = vec![BigRat::zero(); half + 1];
        root[half] = lead;
        for k in 1..=half {
            let mut acc = self.coeffs[deg - k].clone();
            for i in 1..k {
                acc -= &root[half - i] * &root[half - (k - i)];
            }
            root[half - k] = acc * &two_lead_inv;
        }
        let candidate = RatPoly::from_coeffs(root);
        (&candidate * &candidate == *self).then_some(candidate)
    }

    /// Content-free integer form: the primitive integer polynomial with positive
    /// leading coefficient proportional to `self`.
    pub fn primitive_integer(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRat::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        Self::from_coeffs(
            ints.into_iter()
                .map(|c| BigRat::from_integer(c / &g * &sign))
                .collect(),
        )
    }

    /// Renders the polynomial using `var` as the indeterminate, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }
}

fn exact(p: &RatPoly, d: &RatPoly) -> Result<RatPoly> {
    Ok(p.exact_div(d)?
        .expect("divisor produced by gcd divides exactly"))
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        -&self
    }
}

impl Zero for RatPoly {
    fn zero() -> Self {
        RatPoly::zero()
    }
    fn is_zero(&self) -> bool {
        RatPoly::is_zero(self)
    }
}

impl One for RatPoly {
    fn one() -> Self {
        RatPoly::one()
    }
}
