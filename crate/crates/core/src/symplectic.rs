//! Exact integer matrices, generator words, and the invariant antisymmetric form
//! preserved by a set of generators.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::algebra::{char_poly, BigRat};
use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| BigInt::zero())
    }

    /// Block matrix `[[0, I], [-I, 0]]` of size `2d`.
    pub fn standard_form(d: usize) -> Self {
        Self::from_fn(2 * d, |i, j| {
            if j == i + d {
                BigInt::one()
            } else if i == j + d {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Parses whitespace-separated decimal rows; blank lines and `#` comments are skipped.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>().map_err(|_| {
                        Error::Parse(format!("line {}: invalid integer {tok:?}", lineno + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(Error::Parse("no matrix rows".into()));
        }
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    pub fn try_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        Ok(Self::from_fn(n, |i, j| {
            (0..n).fold(BigInt::zero(), |acc, k| {
                let a = self.get(i, k);
                if a.is_zero() {
                    acc
                } else {
                    acc + a * rhs.get(k, j)
                }
            })
        }))
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.rows().map(<[BigInt]>::to_vec).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let n = self.dim - 1;
        Self::from_fn(n, |i, j| {
            let si = if i < row { i } else { i + 1 };
            let sj = if j < col { j } else { j + 1 };
            self.get(si, sj).clone()
        })
    }

    /// Classical adjugate: `adj(M) * M = det(M) * I`.
    pub fn adjugate(&self) -> IntMatrix {
        if self.dim == 1 {
            return Self::identity(1);
        }
        Self::from_fn(self.dim, |i, j| {
            let c = self.minor(j, i).det();
            if (i + j) % 2 == 0 {
                c
            } else {
                -c
            }
        })
    }

    /// Exact inverse of a unimodular matrix (`det = ±1`), via the adjugate.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let det = self.det();
        if det.is_one() {
            Ok(self.adjugate())
        } else if (-&det).is_one() {
            Ok(-&self.adjugate())
        } else {
            Err(Error::NotUnimodular(det.to_string()))
        }
    }

    /// `gᵀ J g == J`.
    pub fn preserves(&self, form: &IntMatrix) -> bool {
        self.dim == form.dim && &(&self.transpose() * form) * self == *form
    }

    /// Greatest common divisor of all entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        self.entries.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigInt {
        self.entries
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_default()
    }

    /// Lossy conversion to a floating-point matrix.
    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.dim, self.dim, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Rows as decimal strings, the exact serialization used in reports.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    /// Panics on dimension mismatch; use [`IntMatrix::try_mul`] to handle it.
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl std::ops::Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_string_rows()).finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.to_string_rows();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

/// Exact nullspace basis of a rational matrix given by rows over `ncols` unknowns.
fn rational_nullspace(mut rows: Vec<Vec<BigRat>>, ncols: usize) -> Vec<Vec<BigRat>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRat::zero(); ncols];
            v[free] = BigRat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[row][free].clone();
            }
            v
        })
        .collect()
}

/// Solves `gᵀ J g = J` for all generators over antisymmetric `J`.
///
/// Returns the unique (up to scale) solution as a primitive integer matrix, with the
/// sign fixed so that the first nonzero entry above the diagonal is positive.
pub fn infer_invariant_form(generators: &[IntMatrix]) -> Result<IntMatrix> {
    let first = generators.first().ok_or(Error::NoInvariantForm)?;
    let n = first.dim();
    if let Some(g) = generators.iter().find(|g| g.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.dim(),
        });
    }
    // unknowns: J[i][j] for i < j, row-major
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let basis_form = |k: usize| {
        let (p, q) = pairs[k];
        IntMatrix::from_fn(n, |i, j| {
            if (i, j) == (p, q) {
                BigInt::one()
            } else if (i, j) == (q, p) {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        })
    };
    let mut equations: Vec<Vec<BigRat>> = Vec::new();
    for g in generators {
        let gt = g.transpose();
        let images: Vec<IntMatrix> = (0..pairs.len())
            .map(|k| {
                let e = basis_form(k);
                let mut img = &(&gt * &e) * g;
                for (i, j) in [pairs[k], (pairs[k].1, pairs[k].0)] {
                    let v = img.get(i, j) - e.get(i, j);
                    img.set(i, j, v);
                }
                img
            })
            .collect();
        // antisymmetric output: the upper triangle carries every constraint
        for &(i, j) in &pairs {
            equations.push(
                images
                    .iter()
                    .map(|img| BigRat::from_integer(img.get(i, j).clone()))
                    .collect(),
            );
        }
    }
    let null = rational_nullspace(equations, pairs.len());
    match null.len() {
        0 => return Err(Error::NoInvariantForm),
        1 => {}
        k => return Err(Error::FormNotUnique(k)),
    }
    let v = &null[0];
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * BigRat::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let lead_negative = ints.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative);
    for c in ints.iter_mut() {
        *c = &*c / &g;
        if lead_negative {
            *c = -&*c;
        }
    }
    let mut form = IntMatrix::zeros(n);
    for (k, &(i, j)) in pairs.iter().enumerate() {
        form.set(i, j, ints[k].clone());
        form.set(j, i, -ints[k].clone());
    }
    if form.det().is_zero() {
        return Err(Error::DegenerateForm);
    }
    Ok(form)
}

/// A generator set together with the antisymmetric form it preserves.
#[derive(Clone, Debug)]
pub struct SymplecticContext {
    form: IntMatrix,
    generators: Vec<IntMatrix>,
}

impl SymplecticContext {
    /// Infers the invariant form from the generators.
    pub fn new(generators: Vec<IntMatrix>) -> Result<Self> {
        let form = infer_invariant_form(&generators)?;
        Self::with_form(form, generators)
    }

    /// Uses an explicitly supplied form, verifying all invariants.
    pub fn with_form(form: IntMatrix, generators: Vec<IntMatrix>) -> Result<Self> {
        let n = form.dim();
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidParams(format!("form dimension {n} is not even")));
        }
        if !form.is_antisymmetric() {
            return Err(Error::InvalidParams("form is not antisymmetric".into()));
        }
        if form.det().is_zero() {
            return Err(Error::DegenerateForm);
        }
        for g in &generators {
            if g.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: g.dim(),
                });
            }
            if !g.preserves(&form) {
                return Err(Error::NotSymplectic);
            }
        }
        Ok(Self { form, generators })
    }

    pub fn form(&self) -> &IntMatrix {
        &self.form
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    /// Exact product of the word's letters, left to right.
    pub fn eval_word(&self, word: &GeneratorWord) -> Result<IntMatrix> {
        let mut acc = IntMatrix::identity(self.dim());
        for &(index, exp) in word.letters() {
            let g = self.generators.get(index).ok_or(Error::BadGeneratorIndex {
                index,
                count: self.generators.len(),
            })?;
            let factor = if exp > 0 {
                g.pow(exp.unsigned_abs())
            } else {
                g.inverse()?.pow(exp.unsigned_abs())
            };
            acc = &acc * &factor;
        }
        Ok(acc)
    }
}

/// A word `g_{i1}^{e1} g_{i2}^{e2} ...` over a generator list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct GeneratorWord {
    letters: Vec<(usize, i64)>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<(usize, i64)>) -> Result<Self> {
        if letters.iter().any(|&(_, e)| e == 0) {
            return Err(Error::ZeroExponent);
        }
        Ok(Self { letters })
    }

    pub fn empty() -> Self {
        Self { letters: Vec::new() }
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Renders e.g. `g0^3*g1` using the supplied generator names.
    pub fn render(&self, names: &[&str]) -> String {
        if self.letters.is_empty() {
            return "I".to_string();
        }
        self.letters
            .iter()
            .map(|&(i, e)| {
                let name = names.get(i).map(|s| s.to_string()).unwrap_or(format!("g{i}"));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// Palindromic quartic `x^4 + a x^3 + b x^2 + a x + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReciprocalQuartic {
    pub a: BigInt,
    pub b: BigInt,
}

impl ReciprocalQuartic {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        Self {
            a: a.into(),
            b: b.into(),
        }
    }

    /// Evaluates the quartic at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        let x2 = x * x;
        &x2 * &x2 + &self.a * &x2 * x + &self.b * &x2 + &self.a * x + 1
    }
}

/// Extracts `(a, b)` from the characteristic polynomial of a symplectic 4x4 matrix.
pub fn reciprocal_char_poly(m: &IntMatrix, ctx: &SymplecticContext) -> Result<ReciprocalQuartic> {
    if m.dim() != 4 || ctx.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        });
    }
    if !m.preserves(ctx.form()) {
        return Err(Error::NotSymplectic);
    }
    reciprocal_from_char_poly(m)
}

/// Like [`reciprocal_char_poly`] but without the symplecticity precondition.
pub fn reciprocal_from_char_poly(m: &IntMatrix) -> Result<ReciprocalQuartic> {
    if m.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.dim(),
        });
    }
    let p = char_poly(m);
    let c: Vec<BigRat> = (0..=4).map(|i| p.coeff(i)).collect();
    if c[0] != c[4] || c[1] != c[3] {
        return Err(Error::NotPalindromic(p.to_string()));
    }
    Ok(ReciprocalQuartic {
        a: c[3].to_integer(),
        b: c[2].to_integer(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn m0() -> IntMatrix {
        IntMatrix::from_i64(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 0],
            vec![5, 5, 1, 0],
            vec![0, -5, -1, 1],
        ])
        .unwrap()
    }

    pub(crate) fn m1() -> IntMatrix {
        IntMatrix::from_i64(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap()
    }

    #[test]
    fn products_and_powers() {
        let id = IntMatrix::identity(4);
        assert_eq!(&id * &id, id);
        assert_eq!(m0().pow(0), id);
        assert_eq!(m0().pow(3), &(&m0() * &m0()) * &m0());
        assert_eq!(m0().det(), BigInt::one());
    }

    #[test]
    fn inverse_and_unimodularity() {
        let inv = m0().inverse().unwrap();
        assert!((&inv * &m0()).is_identity());
        let bad = IntMatrix::from_i64(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(bad.inverse(), Err(Error::NotUnimodular("2".into())));
        let neg = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!((&neg.inverse().unwrap() * &neg).is_identity());
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let m = IntMatrix::from_i64(&[vec![0, 2, 1], vec![3, 0, 4], vec![5, 6, 0]]).unwrap();
        // -2*(0-20) + 1*(18-0)
        assert_eq!(m.det(), BigInt::from(58));
        let adj = m.adjugate();
        assert_eq!(&adj * &m, IntMatrix::from_fn(3, |i, j| if i == j { 58.into() } else { 0.into() }));
    }

    #[test]
    fn mirror_quintic_form() {
        let j = infer_invariant_form(&[m0(), m1()]).unwrap();
        assert_eq!(j, IntMatrix::standard_form(2));
        assert!(m0().preserves(&j) && m1().preserves(&j));
    }

    #[test]
    fn identity_form_not_unique() {
        assert_eq!(
            infer_invariant_form(&[IntMatrix::identity(4)]),
            Err(Error::FormNotUnique(6))
        );
    }

    #[test]
    fn no_form() {
        let diag = |d: [i64; 4]| {
            IntMatrix::from_fn(4, |i, j| if i == j { d[i].into() } else { 0.into() })
        };
        // J_ij d_i d_j = J_ij forces J = 0
        assert_eq!(infer_invariant_form(&[diag([2, 3, 5, 7])]), Err(Error::NoInvariantForm));
        // only the (2,3) entry survives, and that form is degenerate
        assert_eq!(infer_invariant_form(&[diag([2, 3, 1, 1])]), Err(Error::DegenerateForm));
    }

    #[test]
    fn words() {
        let ctx = SymplecticContext::new(vec![m0(), m1()]).unwrap();
        assert!(ctx.eval_word(&GeneratorWord::empty()).unwrap().is_identity());
        let w = GeneratorWord::new(vec![(0, 3), (1, 1)]).unwrap();
        assert_eq!(ctx.eval_word(&w).unwrap(), &m0().pow(3) * &m1());
        let back = GeneratorWord::new(vec![(0, 1), (0, -1)]).unwrap();
        assert!(ctx.eval_word(&back).unwrap().is_identity());
        assert_eq!(GeneratorWord::new(vec![(0, 0)]), Err(Error::ZeroExponent));
        let bad = GeneratorWord::new(vec![(5, 1)]).unwrap();
        assert!(matches!(ctx.eval_word(&bad), Err(Error::BadGeneratorIndex { .. })));
        assert_eq!(w.render(&["M0", "M1"]), "M0^3*M1");
    }

    #[test]
    fn reciprocal_examples() {
        let ctx = SymplecticContext::new(vec![m0(), m1()]).unwrap();
        let a = &m0().pow(3) * &m1();
        assert_eq!(reciprocal_char_poly(&a, &ctx).unwrap(), ReciprocalQuartic::new(31, 71));
        let b = &m0().pow(4) * &m1();
        assert_eq!(reciprocal_char_poly(&b, &ctx).unwrap(), ReciprocalQuartic::new(66, 186));
        assert_eq!(
            reciprocal_char_poly(&IntMatrix::identity(4), &ctx).unwrap(),
            ReciprocalQuartic::new(-4, 6)
        );
        let non_sp = IntMatrix::from_i64(&[
            vec![2, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(reciprocal_char_poly(&non_sp, &ctx), Err(Error::NotSymplectic));
        assert!(matches!(
            reciprocal_from_char_poly(&non_sp),
            Err(Error::NotPalindromic(_))
        ));
    }

    #[test]
    fn parse_text_format() {
        let m = IntMatrix::parse_text("# M1\n1 0 0 0\n0 1 0 1\n\n0 0 1 0\n0 0 0 1\n").unwrap();
        assert_eq!(m, m1());
        assert!(matches!(IntMatrix::parse_text("1 2\n3 x\n"), Err(Error::Parse(_))));
        assert!(matches!(IntMatrix::parse_text("1 2\n3\n"), Err(Error::NotSquare { .. })));
        assert!(matches!(IntMatrix::parse_text("# only\n"), Err(Error::Parse(_))));
    }
}
