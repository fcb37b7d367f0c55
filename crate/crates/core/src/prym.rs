//! Model B Prym eigenform generators on `H₁⁺`, the diagonal-cylinder modulus
//! identity in `Q(√D)`, symbolic discriminants in `w`, and the parameter scan.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{char_poly_coeffs, BigRat, RatPoly};
use crate::criterion::{check_pair, discriminants, CriterionVerdict, DiscriminantTriple};
use crate::error::{Error, Result};
use crate::quadratic::QuadElem;
use crate::symplectic::{reciprocal_char_poly, IntMatrix, ReciprocalQuartic, SymplecticContext};

/// Cylinder parameters `(w, h, e, t)` of a Model B surface, restricted to
/// `t = 0` and `w = 3h + e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct PrymParams {
    w: i64,
    h: i64,
    e: i64,
    t: i64,
}

impl PrymParams {
    pub fn new(w: i64, h: i64, e: i64, t: i64) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidParams(msg));
        if t != 0 {
            return invalid(format!("twist t = {t}, only t = 0 is supported"));
        }
        if e < 1 || h < 1 {
            return invalid(format!("need e >= 1 and h >= 1, got e = {e}, h = {h}"));
        }
        if w != 3 * h + e {
            return invalid(format!("w = {w} violates w = 3h + e = {}", 3 * h + e));
        }
        if w.gcd(&h).gcd(&e).gcd(&t) != 1 {
            return invalid(format!("gcd(w, h, t, e) != 1 for ({w}, {h}, {e}, {t})"));
        }
        if !(h + e < w && w < 2 * (e + 2 * h)) {
            return invalid("Model B condition h + e < w < 2(e + 2h) fails".to_string());
        }
        Ok(Self { w, h, e, t })
    }

    /// `e = 1`, `t = 0`, `w = 3h + 1`.
    pub fn from_h(h: i64) -> Result<Self> {
        Self::new(3 * h + 1, h, 1, 0)
    }

    pub fn w(&self) -> i64 {
        self.w
    }
    pub fn h(&self) -> i64 {
        self.h
    }
    pub fn e(&self) -> i64 {
        self.e
    }
    pub fn t(&self) -> i64 {
        self.t
    }

    /// `D = e² + 4wh`.
    pub fn discriminant(&self) -> BigInt {
        let (w, h, e) = (BigInt::from(self.w), BigInt::from(self.h), BigInt::from(self.e));
        &e * &e + 4 * w * h
    }
}

/// `(ρ_short, ρ_long)`.
pub fn rho_values(params: &PrymParams) -> (BigInt, BigInt) {
    let w = BigInt::from(params.w);
    let e = BigInt::from(params.e);
    let (w2, w3) = (&w * &w, &w * &w * &w);
    let (e2, e3) = (&e * &e, &e * &e * &e);
    let wp = &w + 2 * &e;
    let wm = &w - &e;
    let short = 2 * &wp * &wp * (37 * &w3 - 69 * &e * &w2 + 45 * &e2 * &w - 13 * &e3);
    let long = &wm * &wm * (37 * &w3 + 42 * &e * &w2 - 51 * &e2 * &w + 26 * &e3);
    (short, long)
}

/// The three Dehn-twist matrices `A`, `B`, `C` acting on `H₁⁺` in the basis
/// `{α̃₁, α̃₂, β̃₁, β̃₂}`.
pub fn model_b_generators(params: &PrymParams) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    let w = BigInt::from(params.w);
    let e = BigInt::from(params.e);
    let three = BigInt::from(3);
    let (a_off, rem) = (&w - &e).div_rem(&three);
    if !rem.is_zero() {
        return Err(Error::InvalidParams("3 does not divide w - e".into()));
    }
    let b_num: BigInt = 4 * &w * (&w + 2 * &e);
    let (b_off, rem) = b_num.div_rem(&three);
    if !rem.is_zero() {
        return Err(Error::InvalidParams("3 does not divide 4w(w + 2e)".into()));
    }
    let z = BigInt::zero;
    let o = BigInt::one;
    let a = IntMatrix::from_rows(vec![
        vec![o(), z(), w.clone(), z()],
        vec![z(), o(), z(), a_off],
        vec![z(), z(), o(), z()],
        vec![z(), z(), z(), o()],
    ])?;
    let b = IntMatrix::from_rows(vec![
        vec![o(), z(), z(), z()],
        vec![z(), o(), z(), z()],
        vec![4 * &w * &w, b_off.clone(), o(), z()],
        vec![b_off.clone(), b_off, z(), o()],
    ])?;
    let (rs, rl) = rho_values(params);
    let c = IntMatrix::from_rows(vec![
        vec![1 - &rs, -&rs, &rs + &rl, -&rl],
        vec![z(), o(), -&rl, rl.clone()],
        vec![-&rs, -&rs, 1 + &rs, z()],
        vec![-&rs, -&rs, rs.clone(), o()],
    ])?;
    Ok((a, b, c))
}

/// Symplectic context on `{A, B, C}` with the form inferred from the generators.
pub fn model_b_context(params: &PrymParams) -> Result<SymplecticContext> {
    let (a, b, c) = model_b_generators(params)?;
    SymplecticContext::new(vec![a, b, c])
}

/// Checks `μ_long / μ_short = ρ_short / ρ_long` exactly in `Q(√D)`.
pub fn verify_modulus_ratio(params: &PrymParams) -> Result<bool> {
    if params.w != 3 * params.h + params.e {
        return Err(Error::InvalidParams("the identity requires w = 3h + e".into()));
    }
    let d = params.discriminant();
    let q = |v: i64| BigRat::from_integer(BigInt::from(v));
    let half = BigRat::new(BigInt::one(), BigInt::from(2));
    let rat_elem = |r: BigRat| QuadElem::rational(d.clone(), r);
    // λ = (e + √D) / 2
    let lambda = QuadElem::sqrt_d(d.clone())?.add_rational(&q(params.e)).scale(&half);
    let lam_half = lambda.scale(&half);
    let h_half = q(params.h) * &half;
    let w_half = q(params.w) * &half;

    let s1 = lam_half.add_rational(&h_half);
    let short_num = (&lam_half * &lam_half).try_add(&(&s1 * &s1))?;
    let short_den = lambda.add_rational(&-&w_half).try_mul(&s1)?;
    let mu_short = short_num.try_div(&short_den)?;

    let l1 = lam_half.add_rational(&w_half);
    let l2 = lambda.add_rational(&(q(2) * q(params.h)));
    let long_num = (&l1 * &l1).try_add(&(&l2 * &l2))?.scale(&q(2));
    let long_den = (&rat_elem(w_half)? - &lam_half).try_mul(&l2)?;
    let mu_long = long_num.try_div(&long_den)?;

    let ratio = mu_long.try_div(&mu_short)?;
    let (rs, rl) = rho_values(params);
    let expected = rat_elem(BigRat::new(rs, rl))?;
    Ok(ratio == expected)
}

/// One row of [`scan_parameters`].
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub params: PrymParams,
    pub discriminant: BigInt,
    pub p: ReciprocalQuartic,
    pub q: ReciprocalQuartic,
    pub p_discriminants: DiscriminantTriple,
    pub q_discriminants: DiscriminantTriple,
    pub verdict: CriterionVerdict,
}

#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// `h` values where the criterion is inconclusive.
    pub exceptional: Vec<i64>,
}

/// Runs the criterion on `M = A·B`, `N = B·C` for every `h` in `[h_from, h_to]`
/// (`e = 1`, `t = 0`, `w = 3h + 1`). An empty range yields an empty report.
pub fn scan_parameters(h_from: i64, h_to: i64) -> Result<ScanReport> {
    if h_from < 1 {
        return Err(Error::InvalidParams(format!("h_from = {h_from} must be >= 1")));
    }
    if h_from > h_to {
        return Ok(ScanReport::default());
    }
    let rows: Vec<ScanRow> = (h_from..=h_to)
        .into_par_iter()
        .map(scan_one)
        .collect::<Result<_>>()?;
    let exceptional = rows
        .iter()
        .filter(|r| !r.verdict.is_simple())
        .map(|r| r.params.h())
        .collect();
    Ok(ScanReport { rows, exceptional })
}

pub fn scan_one(h: i64) -> Result<ScanRow> {
    let params = PrymParams::from_h(h)?;
    let ctx = model_b_context(&params)?;
    let [a, b, c] = ctx.generators() else {
        unreachable!("three generators")
    };
    let m = a * b;
    let n = b * c;
    let p = reciprocal_char_poly(&m, &ctx)?;
    let q = reciprocal_char_poly(&n, &ctx)?;
    let verdict = check_pair(&p, &q);
    Ok(ScanRow {
        params,
        discriminant: params.discriminant(),
        p_discriminants: discriminants(&p),
        q_discriminants: discriminants(&q),
        p,
        q,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Symbolic computation in w (e = 1)
// ---------------------------------------------------------------------------

/// Symbolic traces, char-poly coefficients and discriminants of `A·B` and `B·C`
/// as polynomials in `w`, with `e = 1` and `h = (w − 1)/3`.
#[derive(Clone, Debug)]
pub struct SymbolicDiscriminants {
    pub trace_ab: RatPoly,
    pub det_ab: RatPoly,
    pub a_p: RatPoly,
    pub b_p: RatPoly,
    pub a_q: RatPoly,
    pub b_q: RatPoly,
    pub d1_p: RatPoly,
    pub d2_p: RatPoly,
    pub d1_q: RatPoly,
    pub d2_q: RatPoly,
    /// `Δ₁(P)` after the substitution `w = 3h + 1`, as a polynomial in `h`.
    pub d1_p_in_h: RatPoly,
    /// Monic square-free reductions, in the order
    /// `Δ₁(P)(h), Δ₁(P)(w), Δ₂(P)(w), Δ₁(Q)(w), Δ₂(Q)(w)`.
    pub reductions: Vec<(&'static str, RatPoly)>,
}

fn c(n: i64) -> RatPoly {
    RatPoly::constant(BigRat::from_integer(n.into()))
}

fn cq(n: i64, d: i64) -> RatPoly {
    RatPoly::constant(BigRat::new(n.into(), d.into()))
}

fn pmat_mul(a: &[Vec<RatPoly>], b: &[Vec<RatPoly>]) -> Vec<Vec<RatPoly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(RatPoly::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

fn symbolic_generators() -> [Vec<Vec<RatPoly>>; 3] {
    let w = RatPoly::x();
    let w2 = &w * &w;
    let w3 = &w2 * &w;
    let h = &(&w - &c(1)) * &cq(1, 3);
    let k = &(&(&w * &(&w + &c(2))) * &c(4)) * &cq(1, 3);
    let rs = &(&(&w + &c(2)).pow(2) * &c(2))
        * &(&(&(&(&w3 * &c(37)) - &(&w2 * &c(69))) + &(&w * &c(45))) - &c(13));
    let rl = &(&w - &c(1)).pow(2)
        * &(&(&(&(&w3 * &c(37)) + &(&w2 * &c(42))) - &(&w * &c(51))) + &c(26));
    let (o, z) = (c(1), RatPoly::zero());
    let a = vec![
        vec![o.clone(), z.clone(), w.clone(), z.clone()],
        vec![z.clone(), o.clone(), z.clone(), h],
        vec![z.clone(), z.clone(), o.clone(), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), o.clone()],
    ];
    let b = vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), o.clone(), z.clone(), z.clone()],
        vec![&w2 * &c(4), k.clone(), o.clone(), z.clone()],
        vec![k.clone(), k, z.clone(), o.clone()],
    ];
    let cm = vec![
        vec![&o - &rs, -&rs, &rs + &rl, -&rl],
        vec![z.clone(), o.clone(), -&rl, rl.clone()],
        vec![-&rs, -&rs, &o + &rs, z.clone()],
        vec![-&rs, -&rs, rs.clone(), o],
    ];
    [a, b, cm]
}

fn reciprocal_coeffs(m: &[Vec<RatPoly>], name: &str) -> Result<(RatPoly, RatPoly)> {
    let coeffs = char_poly_coeffs(m)?;
    if coeffs[0] != coeffs[4] || coeffs[1] != coeffs[3] {
        return Err(Error::NotPalindromic(format!("symbolic char poly of {name}")));
    }
    Ok((coeffs[3].clone(), coeffs[2].clone()))
}

fn poly_discriminants(a: &RatPoly, b: &RatPoly) -> (RatPoly, RatPoly) {
    let d1 = &(a * a) - &(&(b - &c(2)) * &c(4));
    let bp = b + &c(2);
    let d2 = &(&bp * &bp) - &(&(a * a) * &c(4));
    (d1, d2)
}

/// Computes all symbolic quantities for `e = 1` without comparing them to
/// reference values.
pub fn compute_symbolic(e_fixed: i64) -> Result<SymbolicDiscriminants> {
    if e_fixed != 1 {
        return Err(Error::InvalidParams(format!(
            "symbolic computation is specialised to e = 1, got {e_fixed}"
        )));
    }
    let [a, b, cm] = symbolic_generators();
    let ab = pmat_mul(&a, &b);
    let bc = pmat_mul(&b, &cm);
    // Ã is the upper-right block of A, B̃ the lower-left block of B
    let at_bt: Vec<Vec<RatPoly>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| (0..2).fold(RatPoly::zero(), |acc, k| &acc + &(&a[i][k + 2] * &b[k + 2][j])))
                .collect()
        })
        .collect();
    let trace_ab = &at_bt[0][0] + &at_bt[1][1];
    let det_ab = &(&at_bt[0][0] * &at_bt[1][1]) - &(&at_bt[0][1] * &at_bt[1][0]);
    let (a_p, b_p) = reciprocal_coeffs(&ab, "A*B")?;
    let (a_q, b_q) = reciprocal_coeffs(&bc, "B*C")?;
    let (d1_p, d2_p) = poly_discriminants(&a_p, &b_p);
    let (d1_q, d2_q) = poly_discriminants(&a_q, &b_q);
    let w_of_h = RatPoly::from_ints(&[1, 3]);
    let d1_p_in_h = d1_p.compose(&w_of_h);
    let reductions = vec![
        ("D1(P)^red(h)", d1_p_in_h.squarefree_reduction()?),
        ("D1(P)^red(w)", d1_p.squarefree_reduction()?),
        ("D2(P)^red(w)", d2_p.squarefree_reduction()?),
        ("D1(Q)^red(w)", d1_q.squarefree_reduction()?),
        ("D2(Q)^red(w)", d2_q.squarefree_reduction()?),
    ];
    Ok(SymbolicDiscriminants {
        trace_ab,
        det_ab,
        a_p,
        b_p,
        a_q,
        b_q,
        d1_p,
        d2_p,
        d1_q,
        d2_q,
        d1_p_in_h,
        reductions,
    })
}

/// Reference polynomials as displayed in closed form for the `e = 1` family.
pub mod reference {
    use super::{c, cq};
    use crate::algebra::RatPoly;

    fn w() -> RatPoly {
        RatPoly::x()
    }

    fn p(coeffs_high_first: &[i64]) -> RatPoly {
        let mut v = coeffs_high_first.to_vec();
        v.reverse();
        RatPoly::from_ints(&v)
    }

    /// `4w(10w² + w − 2)/9`
    pub fn trace_ab() -> RatPoly {
        &(&w() * &p(&[10, 1, -2])) * &cq(4, 9)
    }

    /// `32w³(w³ − 3w + 2)/27`
    pub fn det_ab() -> RatPoly {
        &(&w().pow(3) * &p(&[1, 0, -3, 2])) * &cq(32, 27)
    }

    /// `a(Q)` as displayed.
    pub fn a_q() -> RatPoly {
        let terms = [
            (7, cq(-1184, 3)),
            (6, c(-448)),
            (5, c(840)),
            (4, cq(472, 3)),
            (3, c(-296)),
            (2, c(72)),
            (1, cq(208, 3)),
            (0, c(-4)),
        ];
        sum_terms(&terms)
    }

    /// `b(Q)` as displayed.
    pub fn b_q() -> RatPoly {
        let terms = [
            (14, cq(87616, 9)),
            (13, cq(66304, 3)),
            (12, c(-72704)),
            (11, cq(-994048, 9)),
            (10, c(295808)),
            (9, c(106752)),
            (8, cq(-1864192, 3)),
            (7, cq(1076800, 3)),
            (6, c(347072)),
            (5, cq(-5648656, 9)),
            (4, c(405360)),
            (3, c(-132528)),
            (2, cq(171760, 9)),
            (1, cq(-416, 3)),
            (0, c(6)),
        ];
        sum_terms(&terms)
    }

    fn sum_terms(terms: &[(usize, RatPoly)]) -> RatPoly {
        terms.iter().fold(RatPoly::zero(), |acc, (deg, coeff)| {
            &acc + &(coeff * &w().pow(*deg as u32))
        })
    }

    pub fn d1_p_red_h() -> RatPoly {
        p(&[76, 108, 61, 14, 1])
    }

    pub fn d1_p_red_w() -> RatPoly {
        p(&[76, 20, 33, -52, 4])
    }

    pub fn d2_p_red_w() -> RatPoly {
        &w() * &p(&[2, 4, -6, 22, 71, 0, 15, 54])
    }

    pub fn d1_q_red_w() -> RatPoly {
        &(&p(&[2, 2, -1]) * &p(&[2, 2, 5])) * &c(3)
    }

    pub fn d2_q_red_w() -> RatPoly {
        p(&[
            5476, 12432, -40896, -62128, 166392, 60048, -349536, 202344, 195732, -353986,
            227838, -74214, 10654, -156, 9,
        ])
    }

    fn quad37() -> RatPoly {
        p(&[37, -32, 13])
    }

    /// `(16/81) w² (76w⁴ + 20w³ + 33w² − 52w + 4)`
    pub fn d1_p() -> RatPoly {
        &(&w().pow(2) * &d1_p_red_w()) * &cq(16, 81)
    }

    /// `16(3h+1)²(76h⁴ + 108h³ + 61h² + 14h + 1)` in `h`.
    pub fn d1_p_in_h() -> RatPoly {
        &(&p(&[3, 1]).pow(2) * &d1_p_red_h()) * &c(16)
    }

    /// `(512/729)(w−1)² w³ (2w⁷ + 4w⁶ − 6w⁵ + 22w⁴ + 71w³ + 15w + 54)`
    pub fn d2_p() -> RatPoly {
        let tail = p(&[2, 4, -6, 22, 71, 0, 15, 54]);
        &(&(&p(&[1, -1]).pow(2) * &w().pow(3)) * &tail) * &cq(512, 729)
    }

    /// `(64/3)((w−1) w (w+2)(37w² − 32w + 13))² (2w² + 2w − 1)(2w² + 2w + 5)`
    pub fn d1_q() -> RatPoly {
        let inner = &(&(&p(&[1, -1]) * &w()) * &p(&[1, 2])) * &quad37();
        &(&(&inner.pow(2) * &p(&[2, 2, -1])) * &p(&[2, 2, 5])) * &cq(64, 3)
    }

    /// `(1024/81)(w−1)⁴ w² (w+2)⁴ (37w² − 32w + 13)² · (degree-14 factor)`
    pub fn d2_q() -> RatPoly {
        let front = &(&(&p(&[1, -1]).pow(4) * &w().pow(2)) * &p(&[1, 2]).pow(4)) * &quad37().pow(2);
        &(&front * &d2_q_red_w()) * &cq(1024, 81)
    }

    /// Displayed reductions, in the same order as
    /// [`SymbolicDiscriminants::reductions`](super::SymbolicDiscriminants).
    pub fn reductions() -> Vec<RatPoly> {
        vec![d1_p_red_h(), d1_p_red_w(), d2_p_red_w(), d1_q_red_w(), d2_q_red_w()]
    }
}

/// One symbolic comparison.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SymbolicCheck {
    pub quantity: String,
    pub variable: &'static str,
    pub polynomial: String,
    pub degree: usize,
}

fn first_difference(expected: &RatPoly, found: &RatPoly, var: &str) -> String {
    let n = expected.coeffs().len().max(found.coeffs().len());
    for k in (0..n).rev() {
        if expected.coeff(k) != found.coeff(k) {
            return format!(
                "coefficient of {var}^{k}: expected {}, found {}",
                expected.coeff(k),
                found.coeff(k)
            );
        }
    }
    "no coefficient differs".into()
}

fn require_equal(name: &str, var: &str, expected: &RatPoly, found: &RatPoly) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Mismatch {
            quantity: name.to_string(),
            expected: expected.display_in(var),
            found: first_difference(expected, found, var),
        })
    }
}

/// A displayed reduction `R` matches a polynomial `Δ` when `monic(R)` equals the
/// computed monic reduction and `Δ / R` is a constant times a square in `Q[var]`.
/// Constants are units of `Q[var]`, so reductions are only defined up to scale.
fn require_reduction(
    name: &str,
    var: &str,
    delta: &RatPoly,
    computed: &RatPoly,
    displayed: &RatPoly,
) -> Result<()> {
    require_equal(name, var, &displayed.monic(), computed)?;
    let square = delta
        .exact_div(displayed)?
        .and_then(|quot| quot.monic().sqrt())
        .is_some();
    if square {
        Ok(())
    } else {
        Err(Error::Mismatch {
            quantity: name.to_string(),
            expected: "quotient by the displayed reduction is a constant times a square".into(),
            found: "non-square quotient".into(),
        })
    }
}

/// Computes the symbolic quantities and asserts exact equality with every
/// reference polynomial and reduction. Returns the comparisons performed.
pub fn symbolic_discriminants(
    e_fixed: i64,
) -> Result<(SymbolicDiscriminants, Vec<SymbolicCheck>)> {
    let s = compute_symbolic(e_fixed)?;
    let mut checks = Vec::new();
    let mut record = |name: &str, var: &'static str, poly: &RatPoly| {
        checks.push(SymbolicCheck {
            quantity: name.to_string(),
            variable: var,
            polynomial: poly.display_in(var),
            degree: poly.degree().unwrap_or(0),
        });
    };
    let pairs: [(&str, RatPoly, &RatPoly); 8] = [
        ("tr(AtBt)", reference::trace_ab(), &s.trace_ab),
        ("det(AtBt)", reference::det_ab(), &s.det_ab),
        ("a(Q)", reference::a_q(), &s.a_q),
        ("b(Q)", reference::b_q(), &s.b_q),
        ("D1(P)", reference::d1_p(), &s.d1_p),
        ("D2(P)", reference::d2_p(), &s.d2_p),
        ("D1(Q)", reference::d1_q(), &s.d1_q),
        ("D2(Q)", reference::d2_q(), &s.d2_q),
    ];
    for (name, expected, found) in &pairs {
        require_equal(name, "w", expected, found)?;
        record(name, "w", found);
    }
    // a(P) = -(tr + 4), b(P) = det + 2 tr + 6
    let a_p_expected = -&(&s.trace_ab + &c(4));
    require_equal("a(P)", "w", &a_p_expected, &s.a_p)?;
    record("a(P)", "w", &s.a_p);
    let b_p_expected = &(&s.det_ab + &(&s.trace_ab * &c(2))) + &c(6);
    require_equal("b(P)", "w", &b_p_expected, &s.b_p)?;
    record("b(P)", "w", &s.b_p);
    require_equal("D1(P) in h", "h", &reference::d1_p_in_h(), &s.d1_p_in_h)?;
    record("D1(P) in h", "h", &s.d1_p_in_h);

    let deltas = [&s.d1_p_in_h, &s.d1_p, &s.d2_p, &s.d1_q, &s.d2_q];
    for (((name, computed), displayed), delta) in
        s.reductions.iter().zip(reference::reductions()).zip(deltas)
    {
        let var = if name.ends_with("(h)") { "h" } else { "w" };
        require_reduction(name, var, delta, computed, &displayed)?;
        // report the displayed normalisation, which is proven equal up to a square
        record(name, var, &displayed);
    }
    Ok((s, checks))
}
