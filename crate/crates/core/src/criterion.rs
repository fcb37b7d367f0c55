//! Discriminant criterion for pinching and twisting of a pair of matrices in
//! `Sp(4, Z)`, and a deterministic search for word pairs satisfying it.

use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{is_square_rational, BigRat};
use crate::error::{Error, Result};
use crate::symplectic::{reciprocal_char_poly, GeneratorWord, ReciprocalQuartic, SymplecticContext};

/// `Δ₁ = a² − 4(b − 2)`, `Δ₂ = (b + 2)² − 4a²`, `Δ₃ = Δ₁Δ₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantTriple {
    pub d1: BigRat,
    pub d2: BigRat,
    pub d3: BigRat,
}

impl DiscriminantTriple {
    pub fn from_coeffs(a: &BigRat, b: &BigRat) -> Self {
        let two = BigRat::from_integer(2.into());
        let four = BigRat::from_integer(4.into());
        let d1 = a * a - &four * (b - &two);
        let bp2 = b + &two;
        let d2 = &bp2 * &bp2 - four * a * a;
        let d3 = &d1 * &d2;
        Self { d1, d2, d3 }
    }

    pub fn as_array(&self) -> [&BigRat; 3] {
        [&self.d1, &self.d2, &self.d3]
    }
}

pub fn discriminants(p: &ReciprocalQuartic) -> DiscriminantTriple {
    DiscriminantTriple::from_coeffs(
        &BigRat::from_integer(p.a.clone()),
        &BigRat::from_integer(p.b.clone()),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    SimpleByGalois,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    Nonpositive,
    Square,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub label: String,
    pub value: BigRat,
    pub reason: FailureReason,
}

/// Result of evaluating all fifteen quantities for a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionVerdict {
    pub outcome: Outcome,
    pub failures: Vec<Failure>,
}

impl CriterionVerdict {
    pub fn is_simple(&self) -> bool {
        self.outcome == Outcome::SimpleByGalois
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

fn classify(value: &BigRat) -> Option<FailureReason> {
    if !value.is_positive() {
        Some(FailureReason::Nonpositive)
    } else if is_square_rational(value) {
        Some(FailureReason::Square)
    } else {
        None
    }
}

/// The fifteen labelled quantities `Δᵢ(P)`, `Δⱼ(Q)`, `Δᵢ(P)·Δⱼ(Q)` in fixed order.
pub fn criterion_quantities(
    p: &DiscriminantTriple,
    q: &DiscriminantTriple,
) -> Vec<(String, BigRat)> {
    let mut out = Vec::with_capacity(15);
    for (i, v) in p.as_array().into_iter().enumerate() {
        out.push((format!("D{}(P)", i + 1), v.clone()));
    }
    for (j, v) in q.as_array().into_iter().enumerate() {
        out.push((format!("D{}(Q)", j + 1), v.clone()));
    }
    for (i, vp) in p.as_array().into_iter().enumerate() {
        for (j, vq) in q.as_array().into_iter().enumerate() {
            out.push((format!("D{}(P)*D{}(Q)", i + 1, j + 1), vp * vq));
        }
    }
    out
}

/// Every quantity must be positive and not a square in Q.
pub fn check_triples(p: &DiscriminantTriple, q: &DiscriminantTriple) -> CriterionVerdict {
    let failures: Vec<Failure> = criterion_quantities(p, q)
        .into_iter()
        .filter_map(|(label, value)| {
            classify(&value).map(|reason| Failure {
                label,
                value,
                reason,
            })
        })
        .collect();
    let outcome = if failures.is_empty() {
        Outcome::SimpleByGalois
    } else {
        Outcome::Inconclusive
    };
    CriterionVerdict { outcome, failures }
}

pub fn check_pair(p: &ReciprocalQuartic, q: &ReciprocalQuartic) -> CriterionVerdict {
    check_triples(&discriminants(p), &discriminants(q))
}

/// A word pair passing the criterion.
#[derive(Clone, Debug)]
pub struct WordPairHit {
    pub first: GeneratorWord,
    pub second: GeneratorWord,
    pub first_poly: ReciprocalQuartic,
    pub second_poly: ReciprocalQuartic,
    pub verdict: CriterionVerdict,
}

/// Ordering key of an exponent: positive before negative at equal magnitude.
fn exponent_key(e: i64) -> (u64, bool) {
    (e.unsigned_abs(), e < 0)
}

/// Reduced words (no two adjacent letters on the same generator) with
/// `1 ≤ |exponent| ≤ max_exponent` and at most `max_letters` letters, sorted by
/// letter count and then lexicographically on `(index, |exponent|, sign)`.
pub fn enumerate_words(
    generators: usize,
    max_exponent: u32,
    max_letters: usize,
) -> Vec<GeneratorWord> {
    let mut exps: Vec<i64> = (1..=max_exponent as i64).flat_map(|e| [e, -e]).collect();
    exps.sort_by_key(|&e| exponent_key(e));
    let mut out = Vec::new();
    let mut layer: Vec<Vec<(usize, i64)>> = vec![Vec::new()];
    for _ in 0..max_letters {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..generators {
                if w.last().is_some_and(|&(last, _)| last == g) {
                    continue;
                }
                for &e in &exps {
                    let mut nw = w.clone();
                    nw.push((g, e));
                    next.push(nw);
                }
            }
        }
        // generated in (prefix, index, exponent key) order, which is already lexicographic
        out.extend(
            next.iter()
                .map(|l| GeneratorWord::new(l.clone()).expect("nonzero exponents")),
        );
        layer = next;
    }
    out
}

/// Searches for the first word pair, in the documented total order, whose
/// characteristic polynomials pass [`check_pair`].
pub fn search_word_pair(
    ctx: &SymplecticContext,
    max_exponent: u32,
    max_letters: usize,
) -> Result<Option<WordPairHit>> {
    if ctx.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: ctx.dim(),
        });
    }
    if max_exponent == 0 || max_letters == 0 {
        return Err(Error::InvalidParams("search bounds must be at least 1".into()));
    }
    let words = enumerate_words(ctx.generators().len(), max_exponent, max_letters);
    let evaluated: Vec<Option<(ReciprocalQuartic, DiscriminantTriple)>> = words
        .par_iter()
        .map(|w| -> Result<_> {
            let m = ctx.eval_word(w)?;
            let p = reciprocal_char_poly(&m, ctx)?;
            let d = discriminants(&p);
            let own_ok = d.as_array().into_iter().all(|v| classify(v).is_none());
            Ok(own_ok.then_some((p, d)))
        })
        .collect::<Result<_>>()?;
    let candidates: Vec<usize> = (0..words.len()).filter(|&i| evaluated[i].is_some()).collect();
    for total in 2..=2 * max_letters {
        let found = candidates
            .par_iter()
            .enumerate()
            .filter_map(|(pos, &u)| {
                let lu = words[u].len();
                if lu >= total {
                    return None;
                }
                let (pu, du) = evaluated[u].as_ref().unwrap();
                candidates[pos + 1..]
                    .iter()
                    .filter(|&&v| words[v].len() + lu == total)
                    .find_map(|&v| {
                        let (pv, dv) = evaluated[v].as_ref().unwrap();
                        let verdict = check_triples(du, dv);
                        verdict.is_simple().then(|| (u, v, pu.clone(), pv.clone(), verdict))
                    })
            })
            .min_by_key(|(u, v, ..)| (*u, *v));
        if let Some((u, v, first_poly, second_poly, verdict)) = found {
            return Ok(Some(WordPairHit {
                first: words[u].clone(),
                second: words[v].clone(),
                first_poly,
                second_poly,
                verdict,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::symplectic::IntMatrix;
    use num_traits::Zero;

    #[test]
    fn discriminant_examples() {
        let t = discriminants(&ReciprocalQuartic::new(31, 71));
        assert_eq!((t.d1.clone(), t.d2.clone(), t.d3), (rat(685), rat(1485), rat(1_017_225)));
        let t = discriminants(&ReciprocalQuartic::new(-4, 6));
        assert!(t.d1.is_zero() && t.d2.is_zero() && t.d3.is_zero());
        let t = discriminants(&ReciprocalQuartic::new(66, 186));
        assert_eq!((t.d1, t.d2, t.d3), (rat(3620), rat(17920), rat(64_870_400)));
    }

    #[test]
    fn mirror_quintic_pair_passes() {
        let v = check_pair(&ReciprocalQuartic::new(31, 71), &ReciprocalQuartic::new(66, 186));
        assert_eq!(v.outcome, Outcome::SimpleByGalois);
        assert!(v.failures.is_empty());
    }

    #[test]
    fn identity_pair_fails_everywhere() {
        let id = ReciprocalQuartic::new(-4, 6);
        let v = check_pair(&id, &id);
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert_eq!(v.failures.len(), 15);
        assert!(v.failures.iter().all(|f| f.reason == FailureReason::Nonpositive));
    }

    #[test]
    fn square_failure_is_reported() {
        // Δ(P) = Δ(Q) makes Δ1(P)Δ1(Q) a square
        let p = ReciprocalQuartic::new(31, 71);
        let v = check_pair(&p, &p);
        assert_eq!(v.outcome, Outcome::Inconclusive);
        let f = v.failures.iter().find(|f| f.label == "D1(P)*D1(Q)").unwrap();
        assert_eq!(f.reason, FailureReason::Square);
        assert_eq!(f.value, rat(685 * 685));
    }

    #[test]
    fn word_enumeration_order() {
        let words = enumerate_words(2, 2, 2);
        assert_eq!(words.len(), 2 * 4 + 2 * 4 * 4);
        assert_eq!(words[0].letters(), &[(0, 1)]);
        assert_eq!(words[1].letters(), &[(0, -1)]);
        assert_eq!(words[2].letters(), &[(0, 2)]);
        assert_eq!(words[4].letters(), &[(1, 1)]);
        assert_eq!(words[8].letters(), &[(0, 1), (1, 1)]);
        assert!(words.iter().all(|w| w.letters().windows(2).all(|p| p[0].0 != p[1].0)));
    }

    #[test]
    fn search_on_trivial_group() {
        let ctx = SymplecticContext::with_form(IntMatrix::standard_form(2), vec![IntMatrix::identity(4)])
            .unwrap();
        assert!(search_word_pair(&ctx, 3, 2).unwrap().is_none());
        assert!(search_word_pair(&ctx, 0, 2).is_err());
    }
}
