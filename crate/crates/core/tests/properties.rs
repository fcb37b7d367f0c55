use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use simplicity_kit::algebra::{char_poly, int_sqrt, is_square_integer, is_square_rational, ratio, BigRat, RatPoly};
use simplicity_kit::criterion::{check_pair, discriminants};
use simplicity_kit::lyapunov::{estimate_replicate, estimate_spectrum, RandomWalkSpec};
use simplicity_kit::mirror_quintic;
use simplicity_kit::prym::{compute_symbolic, model_b_context, scan_one, verify_modulus_ratio, PrymParams, SymbolicDiscriminants};
use simplicity_kit::spectral::{eigen_reciprocal, invariant_flags, is_pinching, FlagKind};
use simplicity_kit::symplectic::{
    reciprocal_char_poly, GeneratorWord, IntMatrix, ReciprocalQuartic, SymplecticContext,
};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn factor() -> impl Strategy<Value = (Vec<i64>, u32)> {
    (prop::collection::vec(-4i64..=4, 1..=2), -3i64..=3, 1u32..=3).prop_map(|(mut c, lead, m)| {
        c.push(if lead == 0 { 1 } else { lead });
        (c, m)
    })
}

fn poly_with_factors() -> impl Strategy<Value = RatPoly> {
    (prop::collection::vec(factor(), 1..=4), 1i64..=9, prop::bool::ANY).prop_map(|(fs, c, neg)| {
        let c = if neg { -c } else { c };
        fs.into_iter().fold(RatPoly::constant(BigRat::from_integer(c.into())), |acc, (f, m)| {
            &acc * &RatPoly::from_ints(&f).pow(m)
        })
    })
}

fn elementary_product() -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0usize..4, 0usize..4, -3i64..=3), 1..8).prop_map(|ops| {
        ops.into_iter().fold(IntMatrix::identity(4), |g, (i, j, c)| {
            if i == j {
                return g;
            }
            let mut e = IntMatrix::identity(4);
            e.set(i, j, BigInt::from(c));
            &g * &e
        })
    })
}

fn word(generators: usize) -> impl Strategy<Value = GeneratorWord> {
    prop::collection::vec((0..generators, 1i64..=3, prop::bool::ANY), 1..=4).prop_map(|letters| {
        GeneratorWord::new(letters.into_iter().map(|(g, e, neg)| (g, if neg { -e } else { e })).collect())
            .expect("nonzero exponents")
    })
}

fn prym_context(h: i64) -> SymplecticContext {
    model_b_context(&PrymParams::from_h(h).unwrap()).unwrap()
}

fn symbolic() -> &'static SymbolicDiscriminants {
    static S: OnceLock<SymbolicDiscriminants> = OnceLock::new();
    S.get_or_init(|| compute_symbolic(1).unwrap())
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn squarefree_reduction_postconditions(p in poly_with_factors()) {
        let red = p.squarefree_reduction().unwrap();
        prop_assert!(red.is_squarefree());
        prop_assert!(red.gcd(&red.derivative()).unwrap().is_constant());
        let quot = p.monic().exact_div(&red).unwrap();
        prop_assert!(quot.is_some(), "reduction does not divide");
        prop_assert!(quot.unwrap().monic().sqrt().is_some(), "quotient is not a square");
        // Yun factors multiply back to the monic input
        let parts = p.squarefree_decomposition().unwrap();
        let rebuilt = parts
            .iter()
            .enumerate()
            .fold(RatPoly::one(), |acc, (i, f)| &acc * &f.pow(i as u32 + 1));
        prop_assert_eq!(rebuilt, p.monic());
    }

    #[test]
    fn char_poly_is_conjugation_invariant(
        entries in prop::collection::vec(-6i64..=6, 16),
        g in elementary_product(),
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(|r| r.to_vec()).collect();
        let m = IntMatrix::from_i64(&rows).unwrap();
        let conj = &(&g * &m) * &g.inverse().unwrap();
        prop_assert_eq!(char_poly(&conj), char_poly(&m));
    }

    #[test]
    fn check_pair_is_symmetric(a in -200i64..200, b in -200i64..400, c in -200i64..200, d in -200i64..400) {
        let (p, q) = (ReciprocalQuartic::new(a, b), ReciprocalQuartic::new(c, d));
        prop_assert_eq!(check_pair(&p, &q).outcome, check_pair(&q, &p).outcome);
    }
}

proptest! {
    #![proptest_config(config(1000))]

    #[test]
    fn second_discriminant_is_p1_times_pm1(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000) {
        let p = ReciprocalQuartic::new(a, b);
        let d = discriminants(&p);
        let prod = p.eval(&BigInt::one()) * p.eval(&BigInt::from(-1));
        prop_assert_eq!(d.d2.clone(), BigRat::from_integer(prod));
        prop_assert_eq!(d.d3, &d.d1 * &d.d2);
    }

    #[test]
    fn squares_of_rationals_are_squares(n in -10_000i64..10_000, m in 1i64..10_000) {
        let q = ratio(n, m);
        prop_assert!(is_square_rational(&(&q * &q)));
    }

    #[test]
    fn integer_sqrt_brackets(n in 0u64..u64::MAX) {
        let n = BigInt::from(n);
        let (r, _) = int_sqrt(&n).unwrap();
        prop_assert!(&r * &r <= n && n < (&r + 1) * (&r + 1));
    }
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn words_preserve_the_form(w in word(2), h in 1i64..=20, which in 0usize..2, w3 in word(3)) {
        let (ctx, w) = if which == 0 {
            (mirror_quintic::generators().context, w)
        } else {
            (prym_context(h), w3)
        };
        let g = ctx.eval_word(&w).unwrap();
        prop_assert!(g.preserves(ctx.form()));
        prop_assert_eq!(g.det(), BigInt::one());
        // palindromic characteristic polynomial
        let cp = char_poly(&g);
        let c = cp.coeffs();
        prop_assert!(c[0] == c[4] && c[1] == c[3]);
        prop_assert!(reciprocal_char_poly(&g, &ctx).is_ok());
    }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn symbolic_and_exact_routes_agree(h in 1i64..=10_000) {
        let s = symbolic();
        let row = scan_one(h).unwrap();
        let w = BigRat::from_integer(row.params.w().into());
        prop_assert_eq!(s.a_p.eval(&w), BigRat::from_integer(row.p.a.clone()));
        prop_assert_eq!(s.b_p.eval(&w), BigRat::from_integer(row.p.b.clone()));
        prop_assert_eq!(s.a_q.eval(&w), BigRat::from_integer(row.q.a.clone()));
        prop_assert_eq!(s.b_q.eval(&w), BigRat::from_integer(row.q.b.clone()));
    }

    #[test]
    fn passing_pairs_are_pinching(h in 2i64..=120) {
        let row = scan_one(h).unwrap();
        prop_assume!(row.verdict.is_simple());
        let ctx = prym_context(h);
        let g = ctx.generators();
        for m in [&g[0] * &g[1], &g[1] * &g[2]] {
            prop_assert!(is_pinching(&m).unwrap());
            let e = eigen_reciprocal(&m).unwrap();
            let l = &e.eigenvalues;
            prop_assert!(((l[0] * l[3]).re - 1.0).abs() < 1e-9);
            prop_assert!(((l[1] * l[2]).re - 1.0).abs() < 1e-9);
            let flags = invariant_flags(&m, &ctx).unwrap();
            prop_assert_eq!(flags.len(), 12);
            prop_assert_eq!(flags.iter().filter(|f| f.kind == FlagKind::Lagrangian).count(), 4);
        }
    }
}

#[test]
fn squares_plus_one_are_not_squares() {
    for n in 1..=10_000i64 {
        assert!(!is_square_rational(&BigRat::from_integer(BigInt::from(n * n + 1))));
    }
}

#[test]
fn prym_discriminant_nonsquare_for_h_1_mod_3() {
    for h in (1..=10_000i64).filter(|h| h % 3 == 1) {
        let d = PrymParams::from_h(h).unwrap().discriminant();
        assert!(!is_square_integer(&d), "D square at h = {h}");
    }
}

#[test]
fn modulus_ratio_holds_up_to_100() {
    for h in 1..=100 {
        assert!(verify_modulus_ratio(&PrymParams::from_h(h).unwrap()).unwrap(), "h = {h}");
    }
}

#[test]
fn symbolic_reduction_degrees() {
    let degrees: Vec<usize> = symbolic()
        .reductions
        .iter()
        .map(|(_, r)| r.degree().unwrap())
        .collect();
    assert_eq!(degrees, vec![4, 4, 8, 4, 14]);
    assert!(symbolic().reductions.iter().all(|(_, r)| !r.is_zero()));
}

#[test]
fn lyapunov_refinement_and_symmetry() {
    let gens = [
        IntMatrix::from_i64(&[vec![2, 1], vec![1, 1]]).unwrap(),
        IntMatrix::from_i64(&[vec![1, 0], vec![1, 1]]).unwrap(),
        IntMatrix::from_i64(&[vec![1, -1], vec![0, 1]]).unwrap(),
    ];
    let (mut short, mut long) = (0.0, 0.0);
    for seed in 0..10 {
        let a = estimate_spectrum(&RandomWalkSpec::uniform(&gens, 20_000, seed).unwrap()).unwrap();
        let b = estimate_spectrum(&RandomWalkSpec::uniform(&gens, 40_000, seed).unwrap()).unwrap();
        short += a.std_errors[0];
        long += b.std_errors[0];
        let defect = a.pairing_defects()[0].abs();
        assert!(defect < 3.0 * a.std_errors[0].max(1e-12), "seed {seed}: {defect}");
    }
    assert!(long <= short, "doubling steps raised the mean error: {short} -> {long}");
    let spec = RandomWalkSpec::uniform(&gens, 5_000, 7).unwrap();
    assert_eq!(
        estimate_replicate(&spec, 3).unwrap().exponents,
        estimate_replicate(&spec, 3).unwrap().exponents
    );
}
