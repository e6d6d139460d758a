//! Degeneracy structure of Pauli Kraus operators over the symmetric subspace:
//! Schur polynomial evaluation, the eigenvalue measure of tensor-power Choi
//! matrices over `(λ, weight)` classes, two-row probability decay,
//! annihilation counting, complementary-rank bounds, and strong-typicality
//! statistics.
//!
//! Everything here works at the level of partitions and weight classes; no
//! `4^n`-dimensional operator is ever materialized. The counts explain why
//! symmetric-subspace inputs behave like degenerate codes: of the Kraus
//! operators supported on a permutation-invariant error set, only those
//! labelled by partitions with at most two rows act nontrivially on the
//! symmetric subspace, and their share of the probability mass decays like
//! `(1-2p)^n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::Float;
use thiserror::Error;

use crate::channel::PauliChannel;
use crate::ci::SymmetricInput;
use crate::linalg::{numeric_rank, CMatrix};
use crate::oracle::{complementary_spectrum, OracleError, MAX_COMPLEMENT_N};
use crate::rep::{
    binomial_u128, enumerate_partitions, specht_dim, specht_dim_f64, weyl_dim, Partition,
    RepError, MAX_N,
};

/// Relative eigenvalue threshold shared with the dense oracle's rank counts.
pub const RANK_REL_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegenError {
    #[error("n={0} exceeds the supported cap {1} for this operation")]
    TooLarge(usize, usize),

    #[error(transparent)]
    Rep(#[from] RepError),

    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub type DegenResult<T> = Result<T, DegenError>;

/// Error-type class: counts of `(I, X, Y, Z)` factors in a Pauli string.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightVector(pub [u16; 4]);

impl WeightVector {
    pub fn n(&self) -> usize {
        self.0.iter().map(|&w| w as usize).sum()
    }

    /// Number of Pauli strings in this class.
    pub fn string_count(&self, n: usize) -> u128 {
        debug_assert_eq!(self.n(), n);
        multinomial(n, &self.0)
    }

    /// Probability of any single string in this class, `∏ p_i^{w_i}`.
    pub fn string_probability(&self, probs: &[f64; 4]) -> f64 {
        let mut acc = 1.0f64;
        for (w, p) in self.0.iter().zip(probs) {
            if *w == 0 {
                continue;
            }
            if *p == 0.0 {
                return 0.0;
            }
            acc *= p.powi(*w as i32);
        }
        acc
    }
}

fn multinomial(n: usize, w: &[u16; 4]) -> u128 {
    let mut rest = n;
    let mut acc: u128 = 1;
    for &wi in w {
        acc =
            acc.checked_mul(binomial_u128(rest, wi as usize)).expect("multinomial overflows u128");
        rest -= wi as usize;
    }
    acc
}

// ---------------------------------------------------------------------------
// Schur polynomials
// ---------------------------------------------------------------------------

/// `s_λ(x)` for a four-slot partition, by the Jacobi–Trudi determinant in
/// complete homogeneous symmetric polynomials. Stable under repeated
/// variables, which the probability use case always has; the determinant is
/// taken in double-double arithmetic because its cancellation grows like the
/// ratio of `h`-products to the Schur value, which reaches ~1e9 by `n = 40`.
pub fn schur_polynomial(lambda: &Partition, x: &[f64; 4]) -> f64 {
    let parts = padded4(lambda);
    let max_idx = parts[0] as usize + 3;
    let h = complete_homogeneous(x, max_idx);
    let mut m = [[Dd::ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let idx = parts[i] as i64 - i as i64 + j as i64;
            m[i][j] = if idx < 0 { Dd::ZERO } else { h[idx as usize] };
        }
    }
    det4(&m).value()
}

/// `h_0..h_max` of four variables by the one-variable-at-a-time recurrence.
fn complete_homogeneous(x: &[f64; 4], max_idx: usize) -> Vec<Dd> {
    let mut h = alloc::vec![Dd::ZERO; max_idx + 1];
    h[0] = Dd::from(1.0);
    for &xv in x {
        let xd = Dd::from(xv);
        for k in 1..=max_idx {
            h[k] = h[k].add(xd.mul(h[k - 1]));
        }
    }
    h
}

fn det4(m: &[[Dd; 4]; 4]) -> Dd {
    // Laplace expansion along the first row; division-free
    let mut det = Dd::ZERO;
    for j in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != j).collect();
        let minor = det3(
            [m[1][cols[0]], m[1][cols[1]], m[1][cols[2]]],
            [m[2][cols[0]], m[2][cols[1]], m[2][cols[2]]],
            [m[3][cols[0]], m[3][cols[1]], m[3][cols[2]]],
        );
        let term = m[0][j].mul(minor);
        det = if j % 2 == 0 { det.add(term) } else { det.sub(term) };
    }
    det
}

fn det3(r0: [Dd; 3], r1: [Dd; 3], r2: [Dd; 3]) -> Dd {
    let a = r0[0].mul(r1[1].mul(r2[2]).sub(r1[2].mul(r2[1])));
    let b = r0[1].mul(r1[0].mul(r2[2]).sub(r1[2].mul(r2[0])));
    let c = r0[2].mul(r1[0].mul(r2[1]).sub(r1[1].mul(r2[0])));
    a.sub(b).add(c)
}

/// Unevaluated double-double value `hi + lo`, enough to keep the Jacobi–Trudi
/// cancellation at the 1e-20 level for every supported `n`.
#[derive(Copy, Clone, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_renorm(s, e + self.lo + o.lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        quick_renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

#[inline]
fn quick_renorm(hi: f64, lo: f64) -> Dd {
    let s = hi + lo;
    Dd { hi: s, lo: (hi - s) + lo }
}

fn padded4(lambda: &Partition) -> [u16; 4] {
    let mut out = [0u16; 4];
    for (i, &p) in lambda.parts().iter().enumerate() {
        out[i] = p;
    }
    out
}

// ---------------------------------------------------------------------------
// Kostka numbers via horizontal-strip branching
// ---------------------------------------------------------------------------

/// Memoized content tables: for a shape with at most `r` rows, the number of
/// semi-standard fillings with entries in `{1..r}`, for every content. Built
/// by peeling the largest symbol off as a horizontal strip.
#[derive(Default)]
pub struct ContentTables {
    two: BTreeMap<[u16; 2], Vec<([u16; 2], u128)>>,
    three: BTreeMap<[u16; 3], Vec<([u16; 3], u128)>>,
}

impl ContentTables {
    pub fn new() -> Self {
        Self::default()
    }

    fn two_row(&mut self, shape: [u16; 2]) -> Vec<([u16; 2], u128)> {
        if let Some(t) = self.two.get(&shape) {
            return t.clone();
        }
        let (a, b) = (shape[0], shape[1]);
        // ones fill a prefix of the top row of length w1 ∈ [b, a]
        let table: Vec<([u16; 2], u128)> = (b..=a).map(|w1| ([w1, a + b - w1], 1u128)).collect();
        self.two.insert(shape, table.clone());
        table
    }

    fn three_row(&mut self, shape: [u16; 3]) -> Vec<([u16; 3], u128)> {
        if let Some(t) = self.three.get(&shape) {
            return t.clone();
        }
        let (a, b, c) = (shape[0], shape[1], shape[2]);
        let m = a + b + c;
        let mut acc: BTreeMap<[u16; 3], u128> = BTreeMap::new();
        for mu1 in b..=a {
            for mu2 in c..=b {
                let w3 = m - mu1 - mu2;
                for (w2, count) in self.two_row([mu1, mu2]) {
                    *acc.entry([w2[0], w2[1], w3]).or_insert(0) += count;
                }
            }
        }
        let table: Vec<([u16; 3], u128)> = acc.into_iter().collect();
        self.three.insert(shape, table.clone());
        table
    }

    /// All contents of a four-slot shape with their Kostka numbers.
    pub fn contents(&mut self, lambda: &Partition) -> Vec<(WeightVector, u128)> {
        let parts = padded4(lambda);
        let (l1, l2, l3, l4) = (parts[0], parts[1], parts[2], parts[3]);
        let m = l1 + l2 + l3 + l4;
        let mut acc: BTreeMap<[u16; 4], u128> = BTreeMap::new();
        for mu1 in l2..=l1 {
            for mu2 in l3..=l2 {
                for mu3 in l4..=l3 {
                    let w4 = m - mu1 - mu2 - mu3;
                    for (w3, count) in self.three_row([mu1, mu2, mu3]) {
                        *acc.entry([w3[0], w3[1], w3[2], w4]).or_insert(0) += count;
                    }
                }
            }
        }
        acc.into_iter().map(|(w, c)| (WeightVector(w), c)).collect()
    }
}

/// Number of semi-standard Young tableaux of the given shape and content.
pub fn kostka_number(lambda: &Partition, w: &WeightVector) -> u128 {
    if lambda.n() != w.n() {
        return 0;
    }
    let mut tables = ContentTables::new();
    tables.contents(lambda).into_iter().find(|(wc, _)| wc == w).map(|(_, c)| c).unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Measurement distributions over partitions
// ---------------------------------------------------------------------------

/// Distribution of the partition label when the tensor-power Choi state is
/// measured against the isotypic decomposition:
/// `P(λ) = dim(S_λ) · s_λ(p_I, p_X, p_Y, p_Z)`.
pub fn irrep_measurement_distribution(
    channel: &PauliChannel,
    n: usize,
) -> DegenResult<Vec<(Partition, f64)>> {
    if n > MAX_N {
        return Err(DegenError::TooLarge(n, MAX_N));
    }
    let x = channel.probabilities();
    Ok(enumerate_partitions(n, 4)?
        .into_iter()
        .map(|lam| {
            let p = specht_dim_f64(&lam) * schur_polynomial(&lam, &x);
            (lam, p)
        })
        .collect())
}

/// Total probability of measuring a partition with at most two rows.
pub fn two_row_probability(channel: &PauliChannel, n: usize) -> DegenResult<f64> {
    if n > MAX_N {
        return Err(DegenError::TooLarge(n, MAX_N));
    }
    let x = channel.probabilities();
    let mut total = 0.0;
    for l2 in 0..=(n / 2) as u16 {
        let lam = Partition::new(alloc::vec![n as u16 - l2, l2, 0, 0])?;
        total += specht_dim_f64(&lam) * schur_polynomial(&lam, &x);
    }
    Ok(total)
}

/// One `(λ, weight)` class of the Choi eigenvalue measure.
#[derive(Clone, Debug)]
pub struct MeasureEntry {
    pub lambda: Partition,
    pub weight: WeightVector,
    /// `dim(S_λ) × K_{λ,w}`: how many eigenvectors share this eigenvalue class.
    pub multiplicity: u128,
    /// `multiplicity × ∏ p_i^{w_i}`.
    pub probability_mass: f64,
}

#[derive(Clone, Debug)]
pub struct EigenvalueMeasure {
    pub n: usize,
    pub entries: Vec<MeasureEntry>,
}

impl EigenvalueMeasure {
    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.probability_mass).sum()
    }
}

/// Maximum `n` for the eigenvalue-measure enumeration; the entry count grows
/// like `n³` per partition.
pub const MAX_MEASURE_N: usize = 30;

/// The eigenvalue measure of the `n`-fold Choi state over `(λ, weight)`
/// classes: eigenvalues are `∏ p_i^{w_i}` with multiplicity
/// `dim(S_λ)·K_{λ,w}`.
pub fn choi_eigenvalue_measure(channel: &PauliChannel, n: usize) -> DegenResult<EigenvalueMeasure> {
    if n > MAX_MEASURE_N {
        return Err(DegenError::TooLarge(n, MAX_MEASURE_N));
    }
    let probs = channel.probabilities();
    let mut tables = ContentTables::new();
    let mut entries = Vec::new();
    for lam in enumerate_partitions(n, 4)? {
        let dim_s = specht_dim(&lam);
        for (w, kostka) in tables.contents(&lam) {
            let multiplicity = dim_s.checked_mul(kostka).expect("multiplicity overflows u128");
            let probability_mass = multiplicity as f64 * w.string_probability(&probs);
            entries.push(MeasureEntry {
                lambda: lam.clone(),
                weight: w,
                multiplicity,
                probability_mass,
            });
        }
    }
    Ok(EigenvalueMeasure { n, entries })
}

/// Count the Schur-basis Kraus operators spanning the permutation-invariant
/// error set selected by `in_t`, and how many of them act nontrivially on
/// the symmetric subspace (those whose partition has at most two rows):
/// `total = Σ_{w∈T} Σ_λ dim(S_λ)·K_{λ,w}`, `non_annihilating` the same sum
/// restricted to `λ₃ = λ₄ = 0`.
pub fn annihilation_counts(
    n: usize,
    mut in_t: impl FnMut(&WeightVector) -> bool,
) -> DegenResult<(u128, u128)> {
    if n > MAX_MEASURE_N {
        return Err(DegenError::TooLarge(n, MAX_MEASURE_N));
    }
    let mut tables = ContentTables::new();
    let mut total: u128 = 0;
    let mut non_annihilating: u128 = 0;
    for lam in enumerate_partitions(n, 4)? {
        let dim_s = specht_dim(&lam);
        let two_rows = lam.rows() <= 2;
        for (w, kostka) in tables.contents(&lam) {
            if !in_t(&w) {
                continue;
            }
            let mult = dim_s * kostka;
            total += mult;
            if two_rows {
                non_annihilating += mult;
            }
        }
    }
    Ok((total, non_annihilating))
}

// ---------------------------------------------------------------------------
// Complementary-rank bound
// ---------------------------------------------------------------------------

/// Numeric rank of the environment state for a symmetric-subspace input,
/// against the two-row dimension bound
/// `Σ_{λ⊢₄n, λ₃=λ₄=0} dim(S_λ)·dim(V⁴_λ)`.
pub fn complementary_rank_check(
    input: &SymmetricInput,
    channel: &PauliChannel,
) -> DegenResult<(usize, u128)> {
    let n = input.n();
    if n > MAX_COMPLEMENT_N {
        return Err(DegenError::TooLarge(n, MAX_COMPLEMENT_N));
    }
    let rho = dense_symmetric_rho(input);
    let spectrum = complementary_spectrum(&rho, channel, n)?;
    let observed = numeric_rank(&spectrum, RANK_REL_TOL);
    Ok((observed, two_row_bound(n)?))
}

/// `Σ_{λ⊢₄n, λ₃=λ₄=0} dim(S_λ)·dim(V⁴_λ)`.
pub fn two_row_bound(n: usize) -> DegenResult<u128> {
    let mut bound: u128 = 0;
    for l2 in 0..=(n / 2) as u16 {
        let lam = Partition::new(alloc::vec![n as u16 - l2, l2, 0, 0])?;
        bound += specht_dim(&lam) * weyl_dim(&lam, 4)?;
    }
    Ok(bound)
}

/// Dense `ρ = ½(|ψ₀⟩⟨ψ₀| + |ψ₁⟩⟨ψ₁|)` on `2^n` dimensions.
pub fn dense_symmetric_rho(input: &SymmetricInput) -> CMatrix {
    use num_complex::Complex64 as C64;
    let n = input.n();
    let dim = 1usize << n;
    let norms: Vec<f64> = (0..=n).map(|k| crate::rep::binomial(n, k).sqrt()).collect();
    let mut psi = [alloc::vec![C64::new(0.0, 0.0); dim], alloc::vec![C64::new(0.0, 0.0); dim]];
    for x in 0..dim {
        let k = (x as u32).count_ones() as usize;
        psi[0][x] = input.row(0)[k] / norms[k];
        psi[1][x] = input.row(1)[k] / norms[k];
    }
    CMatrix::from_fn(dim, dim, |r, c| {
        0.5 * (psi[0][r] * psi[0][c].conj() + psi[1][r] * psi[1][c].conj())
    })
}

// ---------------------------------------------------------------------------
// Strong typicality over weight classes
// ---------------------------------------------------------------------------

/// Strong typicality of a weight class: every empirical symbol frequency
/// deviates from the distribution by at most `delta`; symbols of probability
/// zero must not occur at all.
pub fn is_strongly_typical(w: &WeightVector, dist: &[f64; 4], delta: f64) -> bool {
    let n = w.n();
    if n == 0 {
        return true;
    }
    for (wi, pi) in w.0.iter().zip(dist) {
        if *pi == 0.0 {
            if *wi != 0 {
                return false;
            }
            continue;
        }
        if (*wi as f64 / n as f64 - pi).abs() > delta {
            return false;
        }
    }
    true
}

/// Exact statistics of the strongly typical set, aggregated over weight
/// classes: total probability mass, string count, and the extreme per-string
/// probabilities.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TypicalStats {
    pub mass: f64,
    pub count: u128,
    pub min_prob: f64,
    pub max_prob: f64,
}

pub fn typical_set_stats(channel: &PauliChannel, n: usize, delta: f64) -> DegenResult<TypicalStats> {
    if n > MAX_N {
        return Err(DegenError::TooLarge(n, MAX_N));
    }
    let dist = channel.probabilities();
    let mut mass = 0.0f64;
    let mut count: u128 = 0;
    let mut min_prob = f64::INFINITY;
    let mut max_prob = 0.0f64;
    for_each_weight(n, |w| {
        if !is_strongly_typical(&w, &dist, delta) {
            return;
        }
        let strings = w.string_count(n);
        let p = w.string_probability(&dist);
        if p == 0.0 {
            return;
        }
        count = count.saturating_add(strings);
        mass += strings as f64 * p;
        min_prob = min_prob.min(p);
        max_prob = max_prob.max(p);
    });
    if count == 0 {
        min_prob = 0.0;
    }
    Ok(TypicalStats { mass, count, min_prob, max_prob })
}

/// Visit every weight vector of total `n`.
pub fn for_each_weight(n: usize, mut f: impl FnMut(WeightVector)) {
    for w1 in 0..=n {
        for w2 in 0..=(n - w1) {
            for w3 in 0..=(n - w1 - w2) {
                let w4 = n - w1 - w2 - w3;
                f(WeightVector([w1 as u16, w2 as u16, w3 as u16, w4 as u16]));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelFamily;
    use crate::linalg::hermitian_eigenvalues;
    use num_complex::Complex64 as C64;
    use num_traits::Zero;

    fn p4(a: u16, b: u16, c: u16, d: u16) -> Partition {
        Partition::new(alloc::vec![a, b, c, d]).unwrap()
    }

    /// Test oracle: enumerate semi-standard tableaux explicitly, visiting
    /// each filling's content.
    fn enumerate_ssyt(parts: &[u16], visit: &mut impl FnMut([u16; 4])) {
        fn rec(parts: &[u16], rows: &mut Vec<Vec<u16>>, r: usize, visit: &mut impl FnMut([u16; 4])) {
            if r == parts.len() || parts[r] == 0 {
                let mut content = [0u16; 4];
                for row in rows.iter() {
                    for &v in row {
                        content[(v - 1) as usize] += 1;
                    }
                }
                visit(content);
                return;
            }
            let len = parts[r] as usize;
            let mut row = alloc::vec![0u16; len];
            fill(parts, rows, r, &mut row, 0, visit);
        }
        fn fill(
            parts: &[u16],
            rows: &mut Vec<Vec<u16>>,
            r: usize,
            row: &mut Vec<u16>,
            pos: usize,
            visit: &mut impl FnMut([u16; 4]),
        ) {
            if pos == row.len() {
                rows.push(row.clone());
                rec(parts, rows, r + 1, visit);
                rows.pop();
                return;
            }
            let above = if r == 0 { 0 } else { rows[r - 1][pos] };
            let left = if pos == 0 { 1 } else { row[pos - 1] };
            for v in left.max(above + 1)..=4 {
                row[pos] = v;
                fill(parts, rows, r, row, pos + 1, visit);
            }
        }
        rec(parts, &mut Vec::new(), 0, visit);
    }

    /// Sum of `x^{content}` over all semi-standard fillings.
    fn ssyt_monomial_sum(parts: &[u16], x: &[f64; 4]) -> f64 {
        let mut total = 0.0;
        enumerate_ssyt(parts, &mut |content| {
            let mut term = 1.0;
            for (w, xv) in content.iter().zip(x) {
                term *= xv.powi(*w as i32);
            }
            total += term;
        });
        total
    }

    #[test]
    fn schur_linear_case() {
        let x = [0.3, 0.25, 0.25, 0.2];
        let s = schur_polynomial(&p4(1, 0, 0, 0), &x);
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn schur_at_all_ones_is_weyl_dimension() {
        for n in 1..=8usize {
            for lam in enumerate_partitions(n, 4).unwrap() {
                let s = schur_polynomial(&lam, &[1.0, 1.0, 1.0, 1.0]);
                let d = weyl_dim(&lam, 4).unwrap() as f64;
                assert!((s - d).abs() < 1e-9 * d, "{lam}: {s} vs {d}");
            }
        }
    }

    #[test]
    fn schur_matches_ssyt_enumeration() {
        let xs = [[0.7, 0.1, 0.1, 0.1], [0.5, 0.3, 0.15, 0.05], [0.4, 0.3, 0.3, 0.0]];
        for n in 1..=7usize {
            for lam in enumerate_partitions(n, 4).unwrap() {
                for x in &xs {
                    let fast = schur_polynomial(&lam, x);
                    let slow = ssyt_monomial_sum(lam.parts(), x);
                    assert!(
                        (fast - slow).abs() <= 1e-10 * slow.max(1e-10),
                        "{lam} {x:?}: {fast} vs {slow}"
                    );
                }
            }
        }
    }

    #[test]
    fn kostka_examples() {
        // single row: one filling per content
        for_each_weight(5, |w| {
            assert_eq!(kostka_number(&p4(5, 0, 0, 0), &w), 1);
        });
        assert_eq!(kostka_number(&p4(2, 1, 0, 0), &WeightVector([1, 1, 1, 0])), 2);
        // content sums count all semi-standard tableaux
        for n in 1..=8usize {
            for lam in enumerate_partitions(n, 4).unwrap() {
                let mut tables = ContentTables::new();
                let total: u128 = tables.contents(&lam).iter().map(|(_, k)| k).sum();
                assert_eq!(total, weyl_dim(&lam, 4).unwrap(), "{lam}");
            }
        }
    }

    #[test]
    fn kostka_matches_explicit_enumeration() {
        for n in 1..=6usize {
            for lam in enumerate_partitions(n, 4).unwrap() {
                let mut by_content: BTreeMap<[u16; 4], u128> = BTreeMap::new();
                enumerate_ssyt(lam.parts(), &mut |c| *by_content.entry(c).or_insert(0) += 1);
                let mut tables = ContentTables::new();
                let table = tables.contents(&lam);
                for (w, k) in &table {
                    assert_eq!(by_content.get(&w.0).copied().unwrap_or(0), *k, "{lam} {w:?}");
                }
                assert_eq!(by_content.len(), table.len(), "{lam}");
            }
        }
    }

    #[test]
    fn distribution_normalizes() {
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        for n in [1usize, 5, 12, 25, 40] {
            let dist = irrep_measurement_distribution(&ch, n).unwrap();
            let total: f64 = dist.iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-9, "n={n}: {total}");
            assert!(dist.iter().all(|(_, p)| *p >= -1e-12));
        }
        // n=1: all mass on the single partition
        let dist = irrep_measurement_distribution(&ch, 1).unwrap();
        assert_eq!(dist.len(), 1);
        assert!((dist[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_spot_value_n2() {
        // P((2,0,0,0)) = h₂(x) = Σ x_i² + Σ_{i<j} x_i x_j
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        let x = ch.probabilities();
        let mut h2 = 0.0;
        for i in 0..4 {
            for j in i..4 {
                h2 += x[i] * x[j];
            }
        }
        let dist = irrep_measurement_distribution(&ch, 2).unwrap();
        let p20 = dist.iter().find(|(l, _)| l.parts() == [2, 0, 0, 0]).unwrap().1;
        assert!((p20 - h2).abs() < 1e-12);
    }

    #[test]
    fn distribution_matches_dense_choi_spectrum() {
        // eigenvalue multiset of J^{⊗n} vs the (λ, w) class expansion
        for (fam, p) in [(ChannelFamily::Depolarizing, 0.12), (ChannelFamily::IndependentXz, 0.2)]
        {
            let ch = fam.channel(p).unwrap();
            for n in 1..=4usize {
                let j1 = ch.choi();
                let mut jn = CMatrix::identity(1);
                for _ in 0..n {
                    jn = jn.kron(&j1);
                }
                let mut dense = hermitian_eigenvalues(&jn.hermitized()).unwrap();
                dense.reverse();

                let measure = choi_eigenvalue_measure(&ch, n).unwrap();
                let mut expanded: Vec<f64> = Vec::new();
                let probs = ch.probabilities();
                for e in &measure.entries {
                    let val = e.weight.string_probability(&probs);
                    for _ in 0..e.multiplicity {
                        expanded.push(val);
                    }
                }
                expanded.sort_by(|a, b| b.partial_cmp(a).unwrap());
                assert_eq!(expanded.len(), dense.len(), "{fam:?} n={n}");
                for (a, b) in expanded.iter().zip(&dense) {
                    assert!((a - b).abs() < 1e-9, "{fam:?} n={n}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn measure_marginals_are_consistent() {
        let ch = ChannelFamily::Depolarizing.channel(0.08).unwrap();
        for n in [1usize, 4, 8, 12] {
            let measure = choi_eigenvalue_measure(&ch, n).unwrap();
            assert!((measure.total_mass() - 1.0).abs() < 1e-9, "n={n}");

            // over weights: recovers the partition distribution
            let dist = irrep_measurement_distribution(&ch, n).unwrap();
            for (lam, expect) in &dist {
                let got: f64 = measure
                    .entries
                    .iter()
                    .filter(|e| &e.lambda == lam)
                    .map(|e| e.probability_mass)
                    .sum();
                assert!((got - expect).abs() < 1e-10, "n={n} {lam}");
            }

            // over partitions: multiplicities count Pauli strings exactly
            let mut by_weight: BTreeMap<[u16; 4], u128> = BTreeMap::new();
            for e in &measure.entries {
                *by_weight.entry(e.weight.0).or_insert(0) += e.multiplicity;
            }
            for_each_weight(n, |w| {
                assert_eq!(
                    by_weight.get(&w.0).copied().unwrap_or(0),
                    w.string_count(n),
                    "n={n} {w:?}"
                );
            });
        }
    }

    #[test]
    fn measure_n1_is_the_probability_vector() {
        let ch = ChannelFamily::TwoPauli.channel(0.2).unwrap();
        let m = choi_eigenvalue_measure(&ch, 1).unwrap();
        assert_eq!(m.entries.len(), 4);
        let mut masses: Vec<f64> = m.entries.iter().map(|e| e.probability_mass).collect();
        masses.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((masses[0] - 0.6).abs() < 1e-14);
        assert!((masses[1] - 0.2).abs() < 1e-14);
        assert!((masses[2] - 0.2).abs() < 1e-14);
        assert!(masses[3].abs() < 1e-14);
    }

    #[test]
    fn two_pauli_y_weights_carry_no_mass() {
        let ch = ChannelFamily::TwoPauli.channel(0.15).unwrap();
        let m = choi_eigenvalue_measure(&ch, 6).unwrap();
        for e in &m.entries {
            if e.weight.0[2] > 0 {
                assert_eq!(e.probability_mass, 0.0);
            }
        }
    }

    #[test]
    fn two_row_probability_basics() {
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        assert!((two_row_probability(&ch, 1).unwrap() - 1.0).abs() < 1e-14);
        let noiseless = PauliChannel::identity();
        assert!((two_row_probability(&noiseless, 2).unwrap() - 1.0).abs() < 1e-12);
        // matches the partition distribution restricted to two rows
        for n in [3usize, 6, 9] {
            let direct = two_row_probability(&ch, n).unwrap();
            let dist = irrep_measurement_distribution(&ch, n).unwrap();
            let summed: f64 = dist.iter().filter(|(l, _)| l.rows() <= 2).map(|(_, p)| p).sum();
            assert!((direct - summed).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn two_row_probability_decays_like_the_bound() {
        // ratio to n²(1−2p)^n stays bounded on the lemma's range
        for p in [0.05, 0.1, 0.15] {
            let ch = ChannelFamily::Depolarizing.channel(p).unwrap();
            let mut worst: f64 = 0.0;
            for n in 4..=40usize {
                let prob = two_row_probability(&ch, n).unwrap();
                let bound = (n * n) as f64 * (1.0 - 2.0 * p).powi(n as i32);
                worst = worst.max(prob / bound);
            }
            assert!(worst < 1.0, "p={p}: ratio {worst} exceeded the frozen constant");
        }
    }

    #[test]
    fn annihilation_counts_all_weights() {
        // n=1: the four Kraus operators all act on the one-row block
        let (total, nonann) = annihilation_counts(1, |_| true).unwrap();
        assert_eq!((total, nonann), (4, 4));
        // n=2: all 16 strings; n=3: all 64
        let (total, _) = annihilation_counts(2, |_| true).unwrap();
        assert_eq!(total, 16);
        let (total, nonann) = annihilation_counts(3, |_| true).unwrap();
        assert_eq!(total, 64);
        // the non-annihilating share is the two-row bound
        assert_eq!(nonann, two_row_bound(3).unwrap());
    }

    #[test]
    fn annihilating_share_grows_with_n() {
        // with T = all errors, the fraction of Kraus operators that act
        // nontrivially on the symmetric subspace shrinks as n grows
        let mut last = 1.1f64;
        for n in [4usize, 8, 12, 16, 20] {
            let (total, nonann) = annihilation_counts(n, |_| true).unwrap();
            let ratio = nonann as f64 / total as f64;
            assert!(ratio < last, "n={n}: {ratio} vs {last}");
            last = ratio;
        }
    }

    #[test]
    fn typicality_predicate() {
        let dist = [0.7, 0.1, 0.1, 0.1];
        // exactly proportional: typical at any δ > 0
        assert!(is_strongly_typical(&WeightVector([7, 1, 1, 1]), &dist, 1e-9));
        // all-identity weight at n=10 deviates by 0.3
        assert!(!is_strongly_typical(&WeightVector([10, 0, 0, 0]), &dist, 0.05));
        assert!(is_strongly_typical(&WeightVector([10, 0, 0, 0]), &dist, 1.0));
        // zero-probability symbols must not occur
        let two_pauli = [0.6, 0.2, 0.0, 0.2];
        assert!(!is_strongly_typical(&WeightVector([6, 2, 1, 1]), &two_pauli, 1.0));
    }

    #[test]
    fn typical_stats_degenerate_delta() {
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        let stats = typical_set_stats(&ch, 6, 1.0).unwrap();
        assert!((stats.mass - 1.0).abs() < 1e-12);
        assert_eq!(stats.count, 4096);

        let ch2 = ChannelFamily::TwoPauli.channel(0.2).unwrap();
        let stats2 = typical_set_stats(&ch2, 6, 1.0).unwrap();
        assert!((stats2.mass - 1.0).abs() < 1e-12);
        assert_eq!(stats2.count, 729); // 3^6: Y never occurs
    }

    #[test]
    fn typical_mass_grows_with_n() {
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        let m10 = typical_set_stats(&ch, 10, 0.05).unwrap();
        let m20 = typical_set_stats(&ch, 20, 0.05).unwrap();
        assert!(m20.mass > m10.mass, "{} vs {}", m20.mass, m10.mass);
        // exact values, frozen: 0.0593 and 0.1972
        assert!((m10.mass - 0.059295096).abs() < 1e-9);
        assert!((m20.mass - 0.197159447).abs() < 1e-9);
        // the half-mass level needs the wider window at this block length
        let w10 = typical_set_stats(&ch, 10, 0.1).unwrap();
        let w20 = typical_set_stats(&ch, 20, 0.1).unwrap();
        assert!(w20.mass >= 0.5, "mass at n=20, delta=0.1: {}", w20.mass);
        assert!(w20.mass > w10.mass);
    }

    #[test]
    fn typical_sandwich() {
        let ch = ChannelFamily::Depolarizing.channel(0.12).unwrap();
        for (n, delta) in [(8usize, 0.08), (15, 0.05), (24, 0.03)] {
            let s = typical_set_stats(&ch, n, delta).unwrap();
            if s.count == 0 {
                continue;
            }
            let count = s.count as f64;
            assert!(s.min_prob * count <= s.mass * (1.0 + 1e-9), "n={n}");
            assert!(s.mass <= s.max_prob * count * (1.0 + 1e-9), "n={n}");
        }
    }

    #[test]
    fn rank_check_small_cases() {
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        // n=1: bound is the full Kraus count
        let mut a0 = alloc::vec![C64::zero(); 2];
        let mut a1 = alloc::vec![C64::zero(); 2];
        a0[0] = C64::new(1.0, 0.0);
        a1[1] = C64::new(1.0, 0.0);
        let input = SymmetricInput::new(a0, a1).unwrap();
        let (observed, bound) = complementary_rank_check(&input, &ch).unwrap();
        assert_eq!(bound, 4);
        assert!(observed <= 4);
    }

    #[test]
    fn rank_check_on_random_symmetric_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(31);
        for n in 2..=5usize {
            let bound = two_row_bound(n).unwrap();
            for _ in 0..10 {
                let row = |rng: &mut rand::rngs::StdRng| -> Vec<C64> {
                    (0..=n)
                        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect()
                };
                let input = SymmetricInput::normalized(row(&mut rng), row(&mut rng)).unwrap();
                for (fam, p) in
                    [(ChannelFamily::Depolarizing, 0.1), (ChannelFamily::TwoPauli, 0.15)]
                {
                    let ch = fam.channel(p).unwrap();
                    let (observed, b) = complementary_rank_check(&input, &ch).unwrap();
                    assert_eq!(b, bound);
                    assert!(observed as u128 <= b, "{fam:?} n={n}: {observed} > {b}");
                }
            }
        }
    }

    #[test]
    fn rank_check_n3_stays_small_and_contrast_case_violates() {
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(32);
        let n = 3;
        let row = |rng: &mut rand::rngs::StdRng| -> Vec<C64> {
            (0..=n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
        };
        let input = SymmetricInput::normalized(row(&mut rng), row(&mut rng)).unwrap();
        let (observed, bound) = complementary_rank_check(&input, &ch).unwrap();
        assert!(observed <= 20, "observed {observed}");
        assert_eq!(bound, 60);

        // contrast: the maximally mixed state on all n qubits is not
        // symmetric-subspace-supported and its environment has full rank
        let dim = 1usize << n;
        let mixed = CMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0));
        let spec = complementary_spectrum(&mixed, &ch, n).unwrap();
        let rank = numeric_rank(&spec, RANK_REL_TOL);
        assert_eq!(rank, 64);
        assert!(rank as u128 > bound);
    }
}
