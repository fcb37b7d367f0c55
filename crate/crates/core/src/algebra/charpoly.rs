use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BigRat, RatPoly};
use crate::error::{Error, Result};
use crate::symplectic::IntMatrix;

/// Coefficient ring for [`char_poly_coeffs`]: a commutative ring containing Q.
pub trait CharPolyScalar: Clone + Zero + One {
    fn add_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Exact division by a positive integer.
    fn div_int(&self, k: usize) -> Self;
}

impl CharPolyScalar for BigRat {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_int(&self, k: usize) -> Self {
        self / BigRat::from_integer(BigInt::from(k))
    }
}

impl CharPolyScalar for RatPoly {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn div_int(&self, k: usize) -> Self {
        self.scale(&BigRat::new(BigInt::one(), BigInt::from(k)))
    }
}

/// Coefficients of `det(xI - M)`, lowest degree first, by Faddeev-LeVerrier.
///
/// `rows` must be square. Works over any ring containing Q, in particular over
/// `Q[w]` for symbolic matrices.
pub fn char_poly_coeffs<T: CharPolyScalar>(rows: &[Vec<T>]) -> Result<Vec<T>> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    // aux = M * M_{k-1}; M_k = aux + c_{n-k+1} I
    let mut mk: Vec<Vec<T>> = vec![vec![T::zero(); n]; n];
    for k in 1..=n {
        let c_prev = coeffs[n - k + 1].clone();
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] = row[i].add_ref(&c_prev);
        }
        let prod = mat_mul(rows, &mk);
        let trace = (0..n).fold(T::zero(), |acc, i| acc.add_ref(&prod[i][i]));
        coeffs[n - k] = trace.neg_ref().div_int(k);
        mk = prod;
    }
    Ok(coeffs)
}

fn mat_mul<T: CharPolyScalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n).fold(T::zero(), |acc, l| {
                        if a[i][l].is_zero() || b[l][j].is_zero() {
                            acc
                        } else {
                            acc.add_ref(&a[i][l].mul_ref(&b[l][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Exact characteristic polynomial `det(xI - M)` of an integer matrix.
pub fn char_poly(m: &IntMatrix) -> RatPoly {
    let rows: Vec<Vec<BigRat>> = (0..m.dim())
        .map(|i| {
            (0..m.dim())
                .map(|j| BigRat::from_integer(m.get(i, j).clone()))
                .collect()
        })
        .collect();
    let coeffs = char_poly_coeffs(&rows).expect("IntMatrix is square");
    RatPoly::from_coeffs(coeffs)
}
