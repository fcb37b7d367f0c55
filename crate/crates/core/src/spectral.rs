//! Floating-point check of the pinching and twisting definitions, independent of
//! the discriminant criterion.
//!
//! Eigenvalues of a 4x4 symplectic matrix come from the closed form for
//! reciprocal quartics: `y = x + 1/x` solves `y² + a·y + (b − 2) = 0` and each `y`
//! gives the pair `x, 1/x`. Eigenvectors for eigenvalues of modulus below one are
//! taken from the exact inverse, where they are dominant.
//!
//! Twisting is decided in the eigenbasis `V` of the pinching matrix. With
//! `W' = V⁻¹ W V`, an invariant subspace is a coordinate subspace, and
//! `W(F) ∩ F' = {0}` for `F = span(S)`, `F' = span(T)` with `|S| + |T| = 4` holds
//! exactly when the minor `W'[Tᶜ, S]` is nonzero. Minors of `W'` are entries of the
//! compound matrix `C_k(V)⁻¹ C_k(W) C_k(V)`, and `C_k(W)` is formed from exact
//! integer minors before conversion to floating point.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::symplectic::{reciprocal_from_char_poly, GeneratorWord, IntMatrix, SymplecticContext};

/// Numerical thresholds for the oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    /// Max `‖Mv − λv‖ / (‖M‖_F ‖v‖)`.
    pub residual: f64,
    /// `|Im λ| ≤ reality · |λ|` counts as real.
    pub reality: f64,
    /// Minimal relative gap between distinct moduli.
    pub modulus_gap: f64,
    /// Relative minors above this are nonzero.
    pub rank: f64,
    /// Relative minors below this are zero; in between the decision is inconclusive.
    pub rank_zero: f64,
    /// Relative bound on the form restricted to an isotropic subspace.
    pub isotropy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-9,
            reality: 1e-9,
            modulus_gap: 1e-6,
            rank: 1e-8,
            rank_zero: 1e-11,
            isotropy: 1e-8,
        }
    }
}

/// Eigenvalues sorted by descending modulus, with eigenvectors and relative residuals.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub eigenvalues: Vec<Complex64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

impl EigenSystem {
    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|l| l.norm()).collect()
    }

    pub fn all_real(&self, tol: &Tolerances) -> bool {
        self.eigenvalues
            .iter()
            .all(|l| l.im.abs() <= tol.reality * l.norm().max(f64::MIN_POSITIVE))
    }

    /// Real eigenvectors as columns, each normalised to unit length with its
    /// largest component made real. `None` unless every eigenvalue is real.
    pub fn real_eigenvectors(&self, tol: &Tolerances) -> Option<DMatrix<f64>> {
        if !self.all_real(tol) {
            return None;
        }
        let n = self.eigenvectors.len();
        let mut out = DMatrix::zeros(n, n);
        for (j, v) in self.eigenvectors.iter().enumerate() {
            let pivot = v
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(Complex64::new(1.0, 0.0));
            let phase = pivot.conj() / pivot.norm();
            let re: Vec<f64> = v.iter().map(|c| (c * phase).re).collect();
            let norm = re.iter().map(|x| x * x).sum::<f64>().sqrt();
            for (i, x) in re.iter().enumerate() {
                out[(i, j)] = x / norm;
            }
        }
        Some(out)
    }
}

fn stable_pair(y: Complex64) -> (Complex64, Complex64) {
    let s = (y * y - 4.0).sqrt();
    let (r1, r2) = ((y + s) / 2.0, (y - s) / 2.0);
    let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
    if big.norm() == 0.0 {
        return (big, big);
    }
    (big, big.inv())
}

/// Roots of `x⁴ + a x³ + b x² + a x + 1`, sorted by descending modulus.
pub fn reciprocal_roots(a: f64, b: f64, delta1: f64) -> Vec<Complex64> {
    // y² + a y + (b − 2) = 0, discriminant Δ₁ = a² − 4(b − 2)
    let sq = Complex64::new(delta1, 0.0).sqrt();
    let ac = Complex64::new(a, 0.0);
    let y1 = if a >= 0.0 { (-ac - sq) / 2.0 } else { (-ac + sq) / 2.0 };
    let y2 = if y1.norm() == 0.0 {
        -ac - y1
    } else {
        Complex64::new(b - 2.0, 0.0) / y1
    };
    let (x1, x2) = stable_pair(y1);
    let (x3, x4) = stable_pair(y2);
    let mut roots = vec![x1, x2, x3, x4];
    roots.sort_by(|p, q| q.norm().total_cmp(&p.norm()));
    roots
}

fn complex_matrix(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

fn null_vector(m: &DMatrix<Complex64>, lambda: Complex64) -> Vec<Complex64> {
    let n = m.nrows();
    let shifted = m - DMatrix::<Complex64>::identity(n, n) * lambda;
    let scale = shifted.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let shifted = if scale > 0.0 { shifted / Complex64::new(scale, 0.0) } else { shifted };
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    v_t.row(k).iter().map(|c| c.conj()).collect()
}

fn relative_residual(m: &DMatrix<Complex64>, lambda: Complex64, v: &[Complex64]) -> f64 {
    let n = m.nrows();
    let fro = m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(lambda.norm());
    let vnorm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let r: f64 = (0..n)
        .map(|i| {
            let mv: Complex64 = (0..n).map(|j| m[(i, j)] * v[j]).sum();
            (mv - lambda * v[i]).norm_sqr()
        })
        .sum::<f64>()
        .sqrt();
    if fro == 0.0 || vnorm == 0.0 {
        r
    } else {
        r / (fro * vnorm)
    }
}

fn eigen_from_parts(
    m: &DMatrix<f64>,
    m_inv: &DMatrix<f64>,
    roots: Vec<Complex64>,
    tol: &Tolerances,
) -> Result<EigenSystem> {
    let mc = complex_matrix(m);
    let mic = complex_matrix(m_inv);
    let mut eigenvectors = Vec::with_capacity(4);
    let mut residuals = Vec::with_capacity(4);
    for &lambda in &roots {
        let v = if lambda.norm() >= 1.0 || lambda.norm() == 0.0 {
            null_vector(&mc, lambda)
        } else {
            null_vector(&mic, lambda.inv())
        };
        let r = relative_residual(&mc, lambda, &v);
        if r.is_nan() || r > tol.residual {
            return Err(Error::IllConditioned(r));
        }
        residuals.push(r);
        eigenvectors.push(v);
    }
    Ok(EigenSystem {
        eigenvalues: roots,
        eigenvectors,
        residuals,
    })
}

/// Eigen-decomposition of a 4x4 integer matrix with palindromic characteristic polynomial.
pub fn eigen_reciprocal(m: &IntMatrix) -> Result<EigenSystem> {
    eigen_reciprocal_with(m, &Tolerances::default())
}

pub fn eigen_reciprocal_with(m: &IntMatrix, tol: &Tolerances) -> Result<EigenSystem> {
    let p = reciprocal_from_char_poly(m)?;
    let delta1: BigInt = &p.a * &p.a - 4 * (&p.b - 2);
    let roots = reciprocal_roots(to_f64(&p.a), to_f64(&p.b), to_f64(&delta1));
    let inv = m.inverse()?;
    eigen_from_parts(&m.to_f64(), &inv.to_f64(), roots, tol)
}

/// Same as [`eigen_reciprocal`] for a real 4x4 matrix with reciprocal spectrum.
pub fn eigen_reciprocal_f64(m: &DMatrix<f64>, tol: &Tolerances) -> Result<EigenSystem> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: m.nrows(),
        });
    }
    // x⁴ − e1 x³ + e2 x² − e3 x + e4
    let a = -m.trace();
    let mut b = 0.0;
    for i in 0..4 {
        for j in i + 1..4 {
            b += m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
        }
    }
    let inv = m
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::NotUnimodular("singular".into()))?;
    let roots = reciprocal_roots(a, b, a * a - 4.0 * (b - 2.0));
    eigen_from_parts(m, &inv, roots, tol)
}

fn to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::NAN)
}

fn pinching_from_eigenvalues(eig: &[Complex64], tol: &Tolerances) -> bool {
    let real = eig
        .iter()
        .all(|l| l.im.abs() <= tol.reality * l.norm().max(f64::MIN_POSITIVE));
    if !real {
        return false;
    }
    let moduli: Vec<f64> = eig.iter().map(|l| l.norm()).collect();
    (0..moduli.len()).all(|i| {
        (i + 1..moduli.len()).all(|j| {
            let (x, y) = (moduli[i], moduli[j]);
            (x - y).abs() > tol.modulus_gap * x.max(y)
        })
    })
}

/// Real eigenvalues with pairwise distinct absolute values.
pub fn is_pinching(m: &IntMatrix) -> Result<bool> {
    is_pinching_with(m, &Tolerances::default())
}

pub fn is_pinching_with(m: &IntMatrix, tol: &Tolerances) -> Result<bool> {
    let eig = eigen_reciprocal_with(m, tol)?;
    Ok(pinching_from_eigenvalues(&eig.eigenvalues, tol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlagKind {
    Isotropic,
    Coisotropic,
    /// Both isotropic and coisotropic (half dimension).
    Lagrangian,
}

impl FlagKind {
    pub fn is_isotropic(self) -> bool {
        matches!(self, FlagKind::Isotropic | FlagKind::Lagrangian)
    }

    pub fn is_coisotropic(self) -> bool {
        matches!(self, FlagKind::Coisotropic | FlagKind::Lagrangian)
    }
}

/// Invariant subspace spanned by the eigenvectors with the given indices
/// (positions in descending-modulus order).
#[derive(Clone, Debug)]
pub struct InvariantFlag {
    pub indices: Vec<usize>,
    pub basis: DMatrix<f64>,
    pub kind: FlagKind,
}

impl InvariantFlag {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }
}

fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Orthonormal basis of the ω-orthogonal complement of the column span of `basis`.
fn omega_complement(form: &DMatrix<f64>, basis: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = form.nrows();
    let constraints = basis.transpose() * form;
    let svd = constraints.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > rel_tol * max)
        .count();
    // nalgebra returns min(rows, cols) singular vectors; complete the basis
    let mut rows: Vec<Vec<f64>> = (0..v_t.nrows())
        .filter(|&k| svd.singular_values[k] > rel_tol * max)
        .map(|k| v_t.row(k).iter().copied().collect())
        .collect();
    let full = complete_orthonormal(&mut rows, n);
    DMatrix::from_fn(n, n - rank, |i, j| full[rank + j][i])
}

/// Extends orthonormal rows to an orthonormal basis of `R^n` by Gram-Schmidt on
/// the standard basis.
fn complete_orthonormal(rows: &mut Vec<Vec<f64>>, n: usize) -> Vec<Vec<f64>> {
    for k in 0..n {
        if rows.len() == n {
            break;
        }
        let mut v: Vec<f64> = (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect();
        for _ in 0..2 {
            for r in rows.iter() {
                let d: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (vi, ri) in v.iter_mut().zip(r) {
                    *vi -= d * ri;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            rows.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    rows.clone()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Flags spanned by eigenvector subsets of a pinching matrix with respect to
/// an explicit (real) symplectic form.
pub fn invariant_flags_for(
    vectors: &DMatrix<f64>,
    form: &DMatrix<f64>,
    tol: &Tolerances,
) -> Vec<InvariantFlag> {
    let n = vectors.ncols();
    let form_scale = form.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut flags = Vec::new();
    for k in 1..n {
        for s in subsets(n, k) {
            let basis = DMatrix::from_fn(n, k, |i, j| vectors[(i, s[j])]);
            let gram = basis.transpose() * form * &basis;
            let isotropic = gram.iter().all(|x| x.abs() <= tol.isotropy * form_scale);
            let comp = omega_complement(form, &basis, tol.rank);
            let mut joined = DMatrix::zeros(n, k + comp.ncols());
            joined.columns_mut(0, k).copy_from(&basis);
            joined.columns_mut(k, comp.ncols()).copy_from(&comp);
            let coisotropic = numerical_rank(&joined, tol.rank) == k;
            let kind = match (isotropic, coisotropic) {
                (true, true) => FlagKind::Lagrangian,
                (true, false) => FlagKind::Isotropic,
                (false, true) => FlagKind::Coisotropic,
                (false, false) => continue,
            };
            flags.push(InvariantFlag {
                indices: s,
                basis,
                kind,
            });
        }
    }
    flags
}

/// All isotropic and coisotropic invariant subspaces of a pinching matrix that
/// are spanned by eigenvectors.
pub fn invariant_flags(m: &IntMatrix, ctx: &SymplecticContext) -> Result<Vec<InvariantFlag>> {
    let tol = Tolerances::default();
    let vectors = pinching_eigenvectors(m, &tol)?;
    Ok(invariant_flags_for(&vectors, &ctx.form().to_f64(), &tol))
}

fn pinching_eigenvectors(m: &IntMatrix, tol: &Tolerances) -> Result<DMatrix<f64>> {
    let eig = eigen_reciprocal_with(m, tol)?;
    if !pinching_from_eigenvalues(&eig.eigenvalues, tol) {
        return Err(Error::NotPinching);
    }
    Ok(eig.real_eigenvectors(tol).expect("pinching spectrum is real"))
}

/// Converts exact integers to floats after a common power-of-two rescaling so
/// that huge entries stay finite. Only ratios of the output are meaningful.
fn scaled_f64(values: &[BigInt]) -> Vec<f64> {
    let bits = values.iter().map(|v| v.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(900);
    values
        .iter()
        .map(|v| {
            let shifted: BigInt = if v.is_negative() { -((-v) >> shift) } else { v >> shift };
            to_f64(&shifted)
        })
        .collect()
}

/// k-th compound matrix of an exact integer matrix (k = 1 or 2 used here).
fn compound_exact(m: &IntMatrix, k: usize) -> (Vec<Vec<usize>>, Vec<BigInt>) {
    let idx = subsets(m.dim(), k);
    let mut out = Vec::with_capacity(idx.len() * idx.len());
    for r in &idx {
        for c in &idx {
            let minor = IntMatrix::from_fn(k, |i, j| m.get(r[i], c[j]).clone());
            out.push(minor.det());
        }
    }
    (idx, out)
}

fn compound_f64(m: &DMatrix<f64>, idx: &[Vec<usize>]) -> DMatrix<f64> {
    let k = idx[0].len();
    DMatrix::from_fn(idx.len(), idx.len(), |a, b| {
        let sub = DMatrix::from_fn(k, k, |i, j| m[(idx[a][i], idx[b][j])]);
        sub.determinant()
    })
}

/// Outcome of one intersection test `W(F) ∩ F' = {0}`.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionTest {
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// Minor divided by the volume of `W(F)` in eigen coordinates: a sine-like
    /// measure of the angle between `W(F)` and `F'`.
    pub relative_minor: f64,
    /// Estimated floating-point error of `relative_minor`.
    pub noise: f64,
}

/// Relative minors for every isotropic `F` / coisotropic `F'` pair of complementary
/// dimension, using a precomputed eigenbasis and flag list.
pub fn intersection_tests(
    vectors: &DMatrix<f64>,
    flags: &[InvariantFlag],
    w: &IntMatrix,
) -> Result<Vec<IntersectionTest>> {
    let n = vectors.nrows();
    let mut tests = Vec::new();
    for k in 1..=n / 2 {
        let (idx, exact) = compound_exact(w, k);
        let size = idx.len();
        let cw = DMatrix::from_row_slice(size, size, &scaled_f64(&exact));
        let cv = compound_f64(vectors, &idx);
        let sv = cv.clone().svd(false, false).singular_values;
        let cond = sv.max() / sv.min();
        let cv_inv = cv
            .clone()
            .try_inverse()
            .ok_or(Error::IllConditioned(f64::INFINITY))?;
        let conj = &cv_inv * &cw * &cv;
        let wnorm = cw.clone().svd(false, false).singular_values.max();
        if wnorm == 0.0 || !wnorm.is_finite() {
            return Err(Error::IllConditioned(wnorm));
        }
        let pos = |s: &[usize]| idx.iter().position(|x| x == s).expect("subset index");
        for f in flags.iter().filter(|f| f.kind.is_isotropic() && f.dim() == k) {
            let col = pos(&f.indices);
            let volume = conj.column(col).norm();
            for g in flags.iter().filter(|g| g.kind.is_coisotropic() && g.dim() == n - k) {
                let complement: Vec<usize> = (0..n).filter(|i| !g.indices.contains(i)).collect();
                let value = conj[(pos(&complement), col)];
                let noise = 4.0 * f64::EPSILON * cond * cond * wnorm / volume;
                tests.push(IntersectionTest {
                    source: f.indices.clone(),
                    target: g.indices.clone(),
                    relative_minor: value.abs() / volume,
                    noise,
                });
            }
        }
    }
    Ok(tests)
}

/// A minor is zero when it is below `rank_zero` and within ten times the
/// roundoff estimate, nonzero when above `rank` and ten times the roundoff
/// estimate, and undecided otherwise.
fn decide(tests: &[IntersectionTest], tol: &Tolerances) -> Result<bool> {
    let mut inconclusive = None;
    for t in tests {
        let m = t.relative_minor;
        if m < tol.rank_zero && m <= 10.0 * t.noise {
            return Ok(false);
        }
        if m <= tol.rank || m <= 10.0 * t.noise {
            inconclusive = Some(m);
        }
    }
    match inconclusive {
        Some(v) => Err(Error::InconclusiveRank(v)),
        None => Ok(true),
    }
}

/// True iff `b` is twisting with respect to the pinching matrix `a`.
pub fn is_twisting_pair(a: &IntMatrix, b: &IntMatrix, ctx: &SymplecticContext) -> Result<bool> {
    let tol = Tolerances::default();
    let vectors = pinching_eigenvectors(a, &tol)?;
    let flags = invariant_flags_for(&vectors, &ctx.form().to_f64(), &tol);
    decide(&intersection_tests(&vectors, &flags, b)?, &tol)
}

/// Candidate twisting words `M^i N^j` and `M^i N^j M^k` over the pair `[M, N]`,
/// `|i|, |j|, |k| ≤ max_exponent`, `j ≠ 0`, ordered by total exponent weight
/// and then lexicographically with positive exponents first.
pub fn twisting_candidates(max_exponent: i64) -> Vec<GeneratorWord> {
    let key = |e: i64| (e.unsigned_abs(), e < 0);
    let mut range: Vec<i64> = (-max_exponent..=max_exponent).collect();
    range.sort_by_key(|&e| key(e));
    let nonzero: Vec<i64> = range.iter().copied().filter(|&e| e != 0).collect();
    type Keyed = (u64, Vec<(u64, bool)>, GeneratorWord);
    let mut out: Vec<Keyed> = Vec::new();
    for &i in &range {
        for &j in &nonzero {
            for k in std::iter::once(None).chain(nonzero.iter().map(|&k| Some(k))) {
                if k.is_some() && i == 0 {
                    // N^j M^k duplicates nothing shorter, but M^0 N^j M^k is covered as
                    // a conjugate-free word only when i != 0
                    continue;
                }
                let mut letters = Vec::new();
                if i != 0 {
                    letters.push((0usize, i));
                }
                letters.push((1usize, j));
                if let Some(k) = k {
                    letters.push((0usize, k));
                }
                let weight: u64 = letters.iter().map(|&(_, e)| e.unsigned_abs()).sum();
                let lex: Vec<(u64, bool)> = [i, j, k.unwrap_or(0)].iter().map(|&e| key(e)).collect();
                out.push((weight, lex, GeneratorWord::new(letters).expect("nonzero")));
            }
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, _, w)| w).collect()
}

/// Result of a bounded twisting-word search.
#[derive(Clone, Debug)]
pub enum TwistingSearch {
    Found {
        word: GeneratorWord,
        tried: usize,
        rank_threshold: f64,
    },
    NotFound {
        tried: usize,
        inconclusive: usize,
    },
}

impl TwistingSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, TwistingSearch::Found { .. })
    }
}

/// Searches words in `[m, n]` for one that is twisting with respect to `m`.
/// A miss is inconclusive, not a refutation.
pub fn find_twisting_word(
    m: &IntMatrix,
    n: &IntMatrix,
    ctx: &SymplecticContext,
    max_exponent: i64,
) -> Result<TwistingSearch> {
    find_twisting_word_with(m, n, ctx, max_exponent, &Tolerances::default())
}

pub fn find_twisting_word_with(
    m: &IntMatrix,
    n: &IntMatrix,
    ctx: &SymplecticContext,
    max_exponent: i64,
    tol: &Tolerances,
) -> Result<TwistingSearch> {
    let vectors = pinching_eigenvectors(m, tol)?;
    let flags = invariant_flags_for(&vectors, &ctx.form().to_f64(), tol);
    let pair = SymplecticContext::with_form(ctx.form().clone(), vec![m.clone(), n.clone()])?;
    let candidates = twisting_candidates(max_exponent);
    let mut inconclusive = 0;
    for (tried, word) in candidates.iter().enumerate() {
        let w = pair.eval_word(word)?;
        match decide(&intersection_tests(&vectors, &flags, &w)?, tol) {
            Ok(true) => {
                return Ok(TwistingSearch::Found {
                    word: word.clone(),
                    tried: tried + 1,
                    rank_threshold: tol.rank,
                })
            }
            Ok(false) => {}
            Err(Error::InconclusiveRank(_)) | Err(Error::IllConditioned(_)) => inconclusive += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(TwistingSearch::NotFound {
        tried: candidates.len(),
        inconclusive,
    })
}

/// Rank thresholds tried in turn when a search ends with undecided minors.
pub const RANK_LADDER: [f64; 3] = [1e-8, 1e-10, 1e-12];

/// [`find_twisting_word_with`] retried down [`RANK_LADDER`] while the previous
/// pass left undecided candidates. Every acceptance still requires the minor to
/// clear ten times its roundoff estimate.
pub fn find_twisting_word_refined(
    m: &IntMatrix,
    n: &IntMatrix,
    ctx: &SymplecticContext,
    max_exponent: i64,
) -> Result<TwistingSearch> {
    let mut last = None;
    for rank in RANK_LADDER {
        let tol = Tolerances {
            rank,
            rank_zero: rank * 1e-3,
            ..Tolerances::default()
        };
        let out = find_twisting_word_with(m, n, ctx, max_exponent, &tol)?;
        match out {
            TwistingSearch::NotFound { inconclusive, .. } if inconclusive > 0 => last = Some(out),
            _ => return Ok(out),
        }
    }
    Ok(last.expect("ladder is nonempty"))
}

/// Floating-point confirmation of the conclusion of the discriminant criterion
/// for a pair: both matrices pinching and a bounded word twisting with respect
/// to each of them.
#[derive(Clone, Debug)]
pub struct PairCrossCheck {
    pub first_pinching: bool,
    pub second_pinching: bool,
    /// Word in `[m, n]` twisting with respect to `m`.
    pub twisting_first: Option<TwistingSearch>,
    /// Word in `[n, m]` twisting with respect to `n`.
    pub twisting_second: Option<TwistingSearch>,
}

impl PairCrossCheck {
    pub fn confirmed(&self) -> bool {
        self.first_pinching
            && self.second_pinching
            && self.twisting_first.as_ref().is_some_and(TwistingSearch::is_found)
            && self.twisting_second.as_ref().is_some_and(TwistingSearch::is_found)
    }
}

pub fn cross_check_pair(
    m: &IntMatrix,
    n: &IntMatrix,
    ctx: &SymplecticContext,
    max_exponent: i64,
) -> Result<PairCrossCheck> {
    let first_pinching = is_pinching(m)?;
    let second_pinching = is_pinching(n)?;
    let twisting_first = if first_pinching {
        Some(find_twisting_word_refined(m, n, ctx, max_exponent)?)
    } else {
        None
    };
    let twisting_second = if second_pinching {
        Some(find_twisting_word_refined(n, m, ctx, max_exponent)?)
    } else {
        None
    };
    Ok(PairCrossCheck {
        first_pinching,
        second_pinching,
        twisting_first,
        twisting_second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m0() -> IntMatrix {
        IntMatrix::from_i64(&[
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 0],
            vec![5, 5, 1, 0],
            vec![0, -5, -1, 1],
        ])
        .unwrap()
    }

    fn m1() -> IntMatrix {
        IntMatrix::from_i64(&[
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ])
        .unwrap()
    }

    fn ab_w4() -> (IntMatrix, SymplecticContext) {
        let params = crate::prym::PrymParams::from_h(1).unwrap();
        let ctx = crate::prym::model_b_context(&params).unwrap();
        let g = ctx.generators();
        (&g[0] * &g[1], ctx)
    }

    #[test]
    fn diagonal_conjugate_spectrum() {
        // g D g⁻¹ with a unimodular g
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, 2.0, 0.5, 1.0 / 3.0]));
        let g = DMatrix::from_row_slice(4, 4, &[
            1.0, 2.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0, 1.0,
        ]);
        let m = &g * d * g.clone().try_inverse().unwrap();
        let eig = eigen_reciprocal_f64(&m, &Tolerances::default()).unwrap();
        for (got, want) in eig.moduli().iter().zip([3.0, 2.0, 0.5, 1.0 / 3.0]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn identity_spectrum() {
        let eig = eigen_reciprocal(&IntMatrix::identity(4)).unwrap();
        assert!(eig.eigenvalues.iter().all(|l| (l - Complex64::new(1.0, 0.0)).norm() < 1e-12));
        assert!(!is_pinching(&IntMatrix::identity(4)).unwrap());
    }

    #[test]
    fn pinching_examples() {
        assert!(!is_pinching(&m0()).unwrap());
        assert!(is_pinching(&(&m0().pow(3) * &m1())).unwrap());
        let (ab, _) = ab_w4();
        assert!(is_pinching(&ab).unwrap());
        let eig = eigen_reciprocal(&ab).unwrap();
        assert!(eig.all_real(&Tolerances::default()));
    }

    #[test]
    fn flags_of_diagonal_model() {
        let d = [4.0, 2.0, 0.25, 0.5];
        // standard pairing: e0 <-> e2, e1 <-> e3
        let form = IntMatrix::standard_form(2).to_f64();
        let vectors = DMatrix::<f64>::identity(4, 4);
        let flags = invariant_flags_for(&vectors, &form, &Tolerances::default());
        assert_eq!(flags.len(), 12);
        let count = |k: FlagKind, dim: usize| flags.iter().filter(|f| f.kind == k && f.dim() == dim).count();
        assert_eq!(count(FlagKind::Isotropic, 1), 4);
        assert_eq!(count(FlagKind::Lagrangian, 2), 4);
        assert_eq!(count(FlagKind::Coisotropic, 3), 4);
        // Lagrangian planes are exactly the pairs whose eigenvalues are not reciprocal
        for f in flags.iter().filter(|f| f.dim() == 2) {
            let prod = d[f.indices[0]] * d[f.indices[1]];
            assert!((prod - 1.0).abs() > 1e-9);
        }
    }

    #[test]
    fn flags_of_prym_product() {
        let (ab, ctx) = ab_w4();
        let flags = invariant_flags(&ab, &ctx).unwrap();
        assert_eq!(flags.len(), 12);
        assert!(matches!(invariant_flags(&m0(), &ctx), Err(Error::NotPinching)));
    }

    #[test]
    fn identity_is_not_twisting() {
        let (ab, ctx) = ab_w4();
        assert!(!is_twisting_pair(&ab, &IntMatrix::identity(4), &ctx).unwrap());
        assert!(!is_twisting_pair(&ab, &ab, &ctx).unwrap());
    }

    #[test]
    fn candidate_order() {
        let c = twisting_candidates(2);
        assert_eq!(c[0].letters(), &[(1, 1)]);
        assert_eq!(c[1].letters(), &[(1, -1)]);
        assert!(c.windows(2).all(|p| {
            let wt = |w: &GeneratorWord| w.letters().iter().map(|l| l.1.unsigned_abs()).sum::<u64>();
            wt(&p[0]) <= wt(&p[1])
        }));
    }
}
