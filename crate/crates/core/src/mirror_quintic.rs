//! Monodromy of the mirror quintic family and the end-to-end check that its
//! Lyapunov spectrum is simple.

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::{char_poly, BigRat, RatPoly};
use crate::criterion::{check_pair, discriminants, Outcome};
use crate::error::{Error, Result};
use crate::spectral::{cross_check_pair, TwistingSearch};
use crate::symplectic::{reciprocal_char_poly, IntMatrix, ReciprocalQuartic, SymplecticContext};

/// Local monodromies around 0 and 1, with their common invariant form.
#[derive(Clone, Debug)]
pub struct MonodromyPresentation {
    pub m0: IntMatrix,
    pub m1: IntMatrix,
    pub context: SymplecticContext,
}

impl MonodromyPresentation {
    pub fn from_matrices(m0: IntMatrix, m1: IntMatrix) -> Result<Self> {
        let context = SymplecticContext::new(vec![m0.clone(), m1.clone()])?;
        Ok(Self { m0, m1, context })
    }

    /// `M₀³M₁`.
    pub fn first(&self) -> IntMatrix {
        &self.m0.pow(3) * &self.m1
    }

    /// `M₀⁴M₁`.
    pub fn second(&self) -> IntMatrix {
        &self.m0.pow(4) * &self.m1
    }
}

pub fn m0() -> IntMatrix {
    IntMatrix::from_i64(&[
        vec![1, 1, 0, 0],
        vec![0, 1, 0, 0],
        vec![5, 5, 1, 0],
        vec![0, -5, -1, 1],
    ])
    .expect("4x4")
}

pub fn m1() -> IntMatrix {
    IntMatrix::from_i64(&[
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 1],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
    ])
    .expect("4x4")
}

/// The hard-coded generators. Form inference failing here means a transcription error.
pub fn generators() -> MonodromyPresentation {
    MonodromyPresentation::from_matrices(m0(), m1()).expect("mirror quintic monodromy has a unique form")
}

/// Expected `(a, b)` of `M₀³M₁` and `M₀⁴M₁`.
pub const FIRST_COEFFS: (i64, i64) = (31, 71);
pub const SECOND_COEFFS: (i64, i64) = (66, 186);
/// Expected `(Δ₁, Δ₂)` of the two polynomials.
pub const FIRST_DISCRIMINANTS: (i64, i64) = (685, 1485);
pub const SECOND_DISCRIMINANTS: (i64, i64) = (3620, 17920);

/// Prime factorisation by trial division, as `(prime, exponent)`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn render_factorization(f: &[(u64, u32)]) -> String {
    f.iter()
        .map(|&(p, k)| if k == 1 { p.to_string() } else { format!("{p}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyReport {
    pub word: String,
    pub a: String,
    pub b: String,
    pub d1: String,
    pub d2: String,
    pub d3: String,
    pub d1_factors: String,
    pub d2_factors: String,
    pub pinching: bool,
    pub twisting_word: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MirrorQuinticReport {
    pub form: IntMatrix,
    pub quasi_unipotent: bool,
    pub first: PolyReport,
    pub second: PolyReport,
    pub verdict: Outcome,
    pub spectral_confirmed: bool,
}

fn expect_eq(quantity: &str, expected: impl ToString, found: impl ToString) -> Result<()> {
    let (expected, found) = (expected.to_string(), found.to_string());
    if expected == found {
        Ok(())
    } else {
        Err(Error::Mismatch {
            quantity: quantity.into(),
            expected,
            found,
        })
    }
}

fn twisting_name(search: &Option<TwistingSearch>, names: &[&str]) -> Option<String> {
    match search {
        Some(TwistingSearch::Found { word, .. }) => Some(word.render(names)),
        _ => None,
    }
}

fn poly_report(
    label: &str,
    word: &str,
    p: &ReciprocalQuartic,
    expected: (i64, i64),
    expected_disc: (i64, i64),
) -> Result<PolyReport> {
    expect_eq(&format!("coefficients ({label})"), format!("{expected:?}"), format!("({}, {})", p.a, p.b))?;
    let d = discriminants(p);
    expect_eq(&format!("D1({label})"), expected_disc.0, &d.d1)?;
    expect_eq(&format!("D2({label})"), expected_disc.1, &d.d2)?;
    Ok(PolyReport {
        word: word.into(),
        a: p.a.to_string(),
        b: p.b.to_string(),
        d1: d.d1.to_string(),
        d2: d.d2.to_string(),
        d3: d.d3.to_string(),
        d1_factors: render_factorization(&factorize(expected_disc.0 as u64)),
        d2_factors: render_factorization(&factorize(expected_disc.1 as u64)),
        pinching: false,
        twisting_word: None,
    })
}

fn expected_quartic((a, b): (i64, i64)) -> RatPoly {
    RatPoly::from_ints(&[1, a, b, a, 1])
}

/// Runs the full reproduction on arbitrary candidate generators. The
/// characteristic polynomials are compared before anything assumes symplecticity,
/// so a transcription error surfaces as a char poly mismatch.
pub fn verify_matrices(m0: &IntMatrix, m1: &IntMatrix) -> Result<MirrorQuinticReport> {
    let a = &m0.pow(3) * m1;
    let b = &m0.pow(4) * m1;
    for (label, m, coeffs) in [("P", &a, FIRST_COEFFS), ("Q", &b, SECOND_COEFFS)] {
        let found = char_poly(m);
        expect_eq(
            &format!("char poly mismatch ({label})"),
            expected_quartic(coeffs).display_in("x"),
            found.display_in("x"),
        )?;
    }
    let pres = MonodromyPresentation::from_matrices(m0.clone(), m1.clone())?;
    let unipotent = RatPoly::from_roots(&vec![BigRat::from_integer(BigInt::from(1)); 4]);
    let quasi_unipotent = char_poly(m0) == unipotent && char_poly(m1) == unipotent;
    let p = reciprocal_char_poly(&a, &pres.context)?;
    let q = reciprocal_char_poly(&b, &pres.context)?;
    let mut first = poly_report("P", "M0^3*M1", &p, FIRST_COEFFS, FIRST_DISCRIMINANTS)?;
    let mut second = poly_report("Q", "M0^4*M1", &q, SECOND_COEFFS, SECOND_DISCRIMINANTS)?;
    let verdict = check_pair(&p, &q);
    if !verdict.is_simple() {
        let f = verdict.first_failure().expect("inconclusive verdict lists a failure");
        return Err(Error::Mismatch {
            quantity: format!("criterion ({})", f.label),
            expected: "positive non-square".into(),
            found: f.value.to_string(),
        });
    }
    let cross = cross_check_pair(&a, &b, &pres.context, 6)?;
    first.pinching = cross.first_pinching;
    second.pinching = cross.second_pinching;
    first.twisting_word = twisting_name(&cross.twisting_first, &["A", "B"]);
    second.twisting_word = twisting_name(&cross.twisting_second, &["B", "A"]);
    Ok(MirrorQuinticReport {
        form: pres.context.form().clone(),
        quasi_unipotent,
        first,
        second,
        verdict: verdict.outcome,
        spectral_confirmed: cross.confirmed(),
    })
}

pub fn verify_theorem() -> Result<MirrorQuinticReport> {
    verify_matrices(&m0(), &m1())
}
