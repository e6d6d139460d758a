//! Partitions, irrep dimension counting, and evaluation of the GL(2) irrep
//! blocks `q²_λ(M)` for arbitrary 2×2 complex matrices.
//!
//! Partitions of `n` into at most `d` parts label the simultaneous
//! decomposition of `(C^d)^{⊗n}` into symmetric-group blocks (dimension given
//! by the hook-length formula) and linear-group blocks (dimension given by the
//! Weyl formula). For `d = 2` the linear-group block of a matrix `M` is
//! materialized explicitly: an `(l+1)×(l+1)` matrix, `l = λ₁ − λ₂`, whose
//! entries are degree-`l` polynomials in the entries of `M` scaled by
//! `det(M)^{λ₂}`.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::{Float, One, Zero};
use thiserror::Error;

use crate::linalg::CMatrix;

/// Largest supported number of boxes. Binomial tables and exact integer
/// dimension formulas are sized for this bound.
pub const MAX_N: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RepError {
    #[error("n must be at least 1 (got {0})")]
    DomainN(usize),

    #[error("part count d must be 2 or 4 (got {0})")]
    DomainD(usize),

    #[error("n exceeds the supported maximum {MAX_N} (got {0})")]
    TooLarge(usize),

    #[error("parts must be non-increasing and fit the slot count")]
    InvalidPartition,
}

pub type RepResult<T> = Result<T, RepError>;

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// Partition of `n` into at most `d` parts, stored with trailing zeros so that
/// `parts().len() == d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    parts: Vec<u16>,
}

impl Partition {
    pub fn new(parts: Vec<u16>) -> RepResult<Self> {
        if parts.is_empty() || parts.len() > 4 {
            return Err(RepError::InvalidPartition);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(RepError::InvalidPartition);
        }
        let n: usize = parts.iter().map(|&p| p as usize).sum();
        if n > MAX_N {
            return Err(RepError::TooLarge(n));
        }
        Ok(Partition { parts })
    }

    /// Two-row partition `(λ₁, λ₂)`.
    pub fn two_row(l1: u16, l2: u16) -> RepResult<Self> {
        Partition::new(vec![l1, l2])
    }

    pub fn parts(&self) -> &[u16] {
        &self.parts
    }

    /// Number of boxes.
    pub fn n(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Number of part slots (2 or 4).
    pub fn d(&self) -> usize {
        self.parts.len()
    }

    /// Number of nonzero parts.
    pub fn rows(&self) -> usize {
        self.parts.iter().filter(|&&p| p > 0).count()
    }

    /// `λ₁ − λ₂`; for two-slot partitions this is the block dimension minus 1.
    pub fn l(&self) -> usize {
        (self.parts[0] - self.parts.get(1).copied().unwrap_or(0)) as usize
    }

    /// Hook lengths of every box, row by row.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let d = self.parts.len();
        let mut hooks = Vec::with_capacity(self.n());
        for r in 0..d {
            let lr = self.parts[r] as usize;
            for c in 0..lr {
                let arm = lr - c - 1;
                let leg = (r + 1..d).filter(|&rr| (self.parts[rr] as usize) > c).count();
                hooks.push((arm + leg + 1) as u32);
            }
        }
        hooks
    }
}

impl core::fmt::Display for Partition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` into at most `d` parts, lexicographically descending.
pub fn enumerate_partitions(n: usize, d: usize) -> RepResult<Vec<Partition>> {
    if n == 0 {
        return Err(RepError::DomainN(n));
    }
    if n > MAX_N {
        return Err(RepError::TooLarge(n));
    }
    if d != 2 && d != 4 {
        return Err(RepError::DomainD(d));
    }
    let mut out = Vec::new();
    let mut current = vec![0u16; d];
    descend(n, d, n, 0, &mut current, &mut out);
    Ok(out)
}

fn descend(
    remaining: usize,
    d: usize,
    cap: usize,
    slot: usize,
    current: &mut Vec<u16>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        for s in slot..d {
            current[s] = 0;
        }
        out.push(Partition { parts: current.clone() });
        return;
    }
    if slot == d {
        return;
    }
    let slots_left = d - slot;
    // largest part first gives descending lexicographic order
    let hi = cap.min(remaining);
    let lo = remaining.div_ceil(slots_left);
    for p in (lo..=hi).rev() {
        current[slot] = p as u16;
        descend(remaining - p, d, p, slot + 1, current, out);
    }
}

// ---------------------------------------------------------------------------
// Dimensions
// ---------------------------------------------------------------------------

const PRIMES: [u32; 19] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67];

/// Dimension of the symmetric-group irrep labelled by `lambda`: the number of
/// standard Young tableaux, `n! / ∏ hooks`, computed exactly through prime
/// exponent bookkeeping.
pub fn specht_dim(lambda: &Partition) -> u128 {
    let n = lambda.n();
    if n == 0 {
        return 1;
    }
    let mut exps = [0i32; PRIMES.len()];
    for (i, &p) in PRIMES.iter().enumerate() {
        // Legendre's formula for the exponent of p in n!
        let mut pk = p as usize;
        while pk <= n {
            exps[i] += (n / pk) as i32;
            match pk.checked_mul(p as usize) {
                Some(next) => pk = next,
                None => break,
            }
        }
    }
    for h in lambda.hook_lengths() {
        let mut h = h;
        for (i, &p) in PRIMES.iter().enumerate() {
            while h % p == 0 {
                exps[i] -= 1;
                h /= p;
            }
        }
        debug_assert_eq!(h, 1, "hook length has a prime factor beyond the table");
    }
    let mut out: u128 = 1;
    for (i, &p) in PRIMES.iter().enumerate() {
        debug_assert!(exps[i] >= 0, "hook product must divide n!");
        for _ in 0..exps[i] {
            out = out.checked_mul(p as u128).expect("Specht dimension overflows u128");
        }
    }
    out
}

/// `specht_dim` as a float, for weight-measure arithmetic at large `n`.
pub fn specht_dim_f64(lambda: &Partition) -> f64 {
    specht_dim(lambda) as f64
}

/// Dimension of the `GL(d)` irrep labelled by `lambda`: the number of
/// semi-standard Young tableaux with entries in `{1..d}`, by the Weyl product
/// formula `∏_{i<j} (λ_i − λ_j + j − i)/(j − i)`.
pub fn weyl_dim(lambda: &Partition, d: usize) -> RepResult<u128> {
    if d != 2 && d != 4 {
        return Err(RepError::DomainD(d));
    }
    if lambda.d() > d && lambda.parts[d..].iter().any(|&p| p > 0) {
        return Err(RepError::InvalidPartition);
    }
    let part = |i: usize| -> i64 { lambda.parts.get(i).copied().unwrap_or(0) as i64 };
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        for j in i + 1..d {
            num *= (part(i) - part(j) + (j as i64 - i as i64)) as u128;
            den *= (j - i) as u128;
        }
    }
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// 2x2 complex matrices
// ---------------------------------------------------------------------------

/// A 2×2 complex matrix; the channel-acted operators `N(|φ_a⟩⟨φ_b|)` fed into
/// the irrep evaluation are of this form and need not be Hermitian or
/// invertible.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn zero() -> Self {
        Mat2([[C64::zero(); 2]; 2])
    }

    pub fn identity() -> Self {
        Mat2([[C64::one(), C64::zero()], [C64::zero(), C64::one()]])
    }

    pub fn diag(a: C64, b: C64) -> Self {
        Mat2([[a, C64::zero()], [C64::zero(), b]])
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn matmul(&self, other: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * other.0[0][j] + self.0[i][1] * other.0[1][j];
            }
        }
        out
    }

    pub fn dagger(&self) -> Mat2 {
        Mat2([
            [self.0[0][0].conj(), self.0[1][0].conj()],
            [self.0[0][1].conj(), self.0[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        out
    }

    pub fn add(&self, other: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// GL(2) irrep blocks
// ---------------------------------------------------------------------------

/// The image of a 2×2 matrix under the irrep labelled by a two-slot partition.
///
/// Basis convention: the `(l+1)` weight-basis labels run from `l` down to `0`,
/// so row/column position `r` carries weight label `l − r`. On the one-row
/// partition `(n, 0)` this makes position `r` coincide with the Dicke state of
/// Hamming weight `r`.
#[derive(Clone, Debug)]
pub struct IrrepBlock {
    pub lambda: Partition,
    pub matrix: CMatrix,
}

impl IrrepBlock {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// Evaluate `q²_λ(M) = det(M)^{λ₂} M_λ` where `M_λ` is the `(l+1)×(l+1)`
/// polynomial block. `det(M)^0 = 1` even for singular `M`.
pub fn irrep_q2(m: &Mat2, lambda: &Partition) -> RepResult<IrrepBlock> {
    if lambda.d() != 2 {
        return Err(RepError::InvalidPartition);
    }
    let l = lambda.l();
    let lam2 = lambda.parts[1] as i32;

    let det_pow = if lam2 == 0 { C64::one() } else { m.det().powi(lam2) };

    let m11 = m.0[0][0];
    let m12 = m.0[0][1];
    let m21 = m.0[1][0];
    let m22 = m.0[1][1];

    // Powers of the four entries up to l, to keep the inner sum cheap.
    let pows = |z: C64| -> Vec<C64> {
        let mut v = Vec::with_capacity(l + 1);
        let mut acc = C64::one();
        for _ in 0..=l {
            v.push(acc);
            acc *= z;
        }
        v
    };
    let (p11, p12, p21, p22) = (pows(m11), pows(m12), pows(m21), pows(m22));

    let lg: Vec<f64> = (0..=l).map(|k| libm::lgamma((k + 1) as f64)).collect();

    let mut out = CMatrix::zeros(l + 1, l + 1);
    for r in 0..=l {
        for c in 0..=l {
            // weight-basis labels (paper-index pair); the placement below is
            // the one under which q²_λ(MN) = q²_λ(M) q²_λ(N).
            let i = l - c;
            let j = l - r;
            let pref = (0.5 * (lg[i] + lg[l - i] - lg[j] - lg[l - j])).exp();
            let klo = (i + j).saturating_sub(l);
            let khi = i.min(j);
            let mut sum = C64::zero();
            for k in klo..=khi {
                let coeff = binomial(j, k) * binomial(l - j, i - k);
                sum += coeff * p11[k] * p12[j - k] * p21[i - k] * p22[l - i - j + k];
            }
            out[(r, c)] = det_pow * pref * sum;
        }
    }
    Ok(IrrepBlock { lambda: lambda.clone(), matrix: out })
}

/// Exact binomial coefficient as a float; `n ≤ 64` keeps the integer exact.
pub fn binomial(n: usize, k: usize) -> f64 {
    debug_assert!(n <= MAX_N);
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as f64
}

/// Exact binomial coefficient as an integer.
pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn p2(a: u16, b: u16) -> Partition {
        Partition::two_row(a, b).unwrap()
    }

    fn random_mat2(rng: &mut impl Rng) -> Mat2 {
        let mut z = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        Mat2([[z(), z()], [z(), z()]])
    }

    // -- enumeration ---------------------------------------------------------

    #[test]
    fn enumerate_small_cases() {
        let p = enumerate_partitions(2, 2).unwrap();
        assert_eq!(p, vec![p2(2, 0), p2(1, 1)]);
        let p = enumerate_partitions(1, 4).unwrap();
        assert_eq!(p, vec![Partition::new(vec![1, 0, 0, 0]).unwrap()]);
        let p = enumerate_partitions(5, 2).unwrap();
        assert_eq!(p, vec![p2(5, 0), p2(4, 1), p2(3, 2)]);
    }

    #[test]
    fn enumerate_matches_brute_force() {
        // oracle: filter all non-increasing tuples
        for n in 1..=9usize {
            for d in [2usize, 4] {
                let got = enumerate_partitions(n, d).unwrap();
                let mut brute: Vec<Vec<u16>> = Vec::new();
                let mut stack = vec![Vec::<u16>::new()];
                while let Some(cur) = stack.pop() {
                    let used: usize = cur.iter().map(|&x| x as usize).sum();
                    if cur.len() == d {
                        if used == n {
                            brute.push(cur);
                        }
                        continue;
                    }
                    let cap = cur.last().copied().unwrap_or(n as u16);
                    for v in 0..=cap.min((n - used) as u16) {
                        let mut next = cur.clone();
                        next.push(v);
                        stack.push(next);
                    }
                }
                brute.sort();
                brute.reverse();
                let got_parts: Vec<Vec<u16>> = got.iter().map(|p| p.parts().to_vec()).collect();
                assert_eq!(got_parts, brute, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn enumerate_rejects_zero() {
        assert!(matches!(enumerate_partitions(0, 2), Err(RepError::DomainN(0))));
    }

    // -- dimensions ----------------------------------------------------------

    /// Count standard Young tableaux by brute-force placement.
    fn syt_count(parts: &[u16]) -> u128 {
        fn rec(shape: &[u16], filled: &mut Vec<u16>, next: u16, n: u16) -> u128 {
            if next > n {
                return 1;
            }
            let mut total = 0;
            for r in 0..shape.len() {
                let c = filled[r];
                if c < shape[r] && (r == 0 || filled[r - 1] > c) {
                    filled[r] += 1;
                    total += rec(shape, filled, next + 1, n);
                    filled[r] -= 1;
                }
            }
            total
        }
        let n: u16 = parts.iter().sum();
        rec(parts, &mut vec![0; parts.len()], 1, n)
    }

    /// Count semi-standard Young tableaux with entries in 1..=d.
    fn ssyt_count(parts: &[u16], d: usize) -> u128 {
        // enumerate row by row; rows weakly increase, columns strictly increase
        fn rows(len: usize, d: usize, min_allowed: &[u16]) -> Vec<Vec<u16>> {
            let mut out = Vec::new();
            let mut cur = vec![0u16; len];
            fn rec(
                pos: usize,
                len: usize,
                d: usize,
                min_allowed: &[u16],
                cur: &mut Vec<u16>,
                out: &mut Vec<Vec<u16>>,
            ) {
                if pos == len {
                    out.push(cur.clone());
                    return;
                }
                let lo = min_allowed[pos].max(if pos > 0 { cur[pos - 1] } else { 1 });
                for v in lo..=(d as u16) {
                    cur[pos] = v;
                    rec(pos + 1, len, d, min_allowed, cur, out);
                }
            }
            rec(0, len, d, min_allowed, &mut cur, &mut out);
            out
        }
        fn count(parts: &[u16], r: usize, prev: &[u16], d: usize) -> u128 {
            if r == parts.len() || parts[r] == 0 {
                return 1;
            }
            let len = parts[r] as usize;
            let min_allowed: Vec<u16> =
                (0..len).map(|c| if r == 0 { 1 } else { prev[c] + 1 }).collect();
            rows(len, d, &min_allowed)
                .into_iter()
                .map(|row| count(parts, r + 1, &row, d))
                .sum()
        }
        count(parts, 0, &[], d)
    }

    #[test]
    fn specht_examples() {
        assert_eq!(specht_dim(&p2(6, 0)), 1);
        assert_eq!(specht_dim(&p2(3, 2)), 5);
        assert_eq!(specht_dim(&p2(3, 2)), syt_count(&[3, 2]));
        assert_eq!(specht_dim(&Partition::new(vec![1, 1, 1, 1]).unwrap()), 1);
    }

    #[test]
    fn specht_matches_syt_enumeration() {
        for n in 1..=8usize {
            for lam in enumerate_partitions(n, 4).unwrap() {
                assert_eq!(specht_dim(&lam), syt_count(lam.parts()), "{lam}");
            }
        }
    }

    #[test]
    fn weyl_examples() {
        for l1 in 0..6u16 {
            for l2 in 0..=l1 {
                if l1 + l2 == 0 {
                    continue;
                }
                assert_eq!(weyl_dim(&p2(l1, l2), 2).unwrap(), (l1 - l2 + 1) as u128);
            }
        }
        assert_eq!(weyl_dim(&p2(1, 1), 2).unwrap(), 1);
        assert_eq!(weyl_dim(&Partition::new(vec![2, 0, 0, 0]).unwrap(), 4).unwrap(), 10);
    }

    #[test]
    fn weyl_matches_ssyt_enumeration() {
        for n in 1..=6usize {
            for lam in enumerate_partitions(n, 4).unwrap() {
                assert_eq!(weyl_dim(&lam, 4).unwrap(), ssyt_count(lam.parts(), 4), "{lam}");
            }
            for lam in enumerate_partitions(n, 2).unwrap() {
                assert_eq!(weyl_dim(&lam, 2).unwrap(), ssyt_count(lam.parts(), 2), "{lam}");
            }
        }
    }

    #[test]
    fn dimension_identity_counts_tensor_space() {
        for d in [2usize, 4] {
            for n in 1..=20usize {
                let total: u128 = enumerate_partitions(n, d)
                    .unwrap()
                    .iter()
                    .map(|lam| specht_dim(lam) * weyl_dim(lam, d).unwrap())
                    .sum();
                assert_eq!(total, (d as u128).pow(n as u32), "d={d} n={n}");
            }
        }
    }

    // -- irrep blocks --------------------------------------------------------

    #[test]
    fn irrep_of_identity_is_identity() {
        for lam in [p2(4, 0), p2(3, 1), p2(2, 2), p2(7, 3)] {
            let b = irrep_q2(&Mat2::identity(), &lam).unwrap();
            assert!(b.matrix.max_abs_diff(&CMatrix::identity(lam.l() + 1)) < 1e-14);
        }
    }

    #[test]
    fn irrep_of_diagonal() {
        let a = C64::new(0.3, 0.7);
        let b = C64::new(-1.1, 0.2);
        let blk = irrep_q2(&Mat2::diag(a, b), &p2(2, 0)).unwrap();
        // position r carries weight label l - r: diag(a², ab, b²)
        let expect = [a * a, a * b, b * b];
        for r in 0..3 {
            for c in 0..3 {
                let want = if r == c { expect[r] } else { C64::zero() };
                assert!((blk.matrix[(r, c)] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn irrep_multiplicativity_spot() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let lam = p2(3, 1);
        for _ in 0..20 {
            let m = random_mat2(&mut rng);
            let n = random_mat2(&mut rng);
            let lhs = irrep_q2(&m.matmul(&n), &lam).unwrap().matrix;
            let rhs =
                irrep_q2(&m, &lam).unwrap().matrix.matmul(&irrep_q2(&n, &lam).unwrap().matrix);
            assert!(lhs.max_abs_diff(&rhs) < 1e-10);
        }
    }

    #[test]
    fn irrep_homomorphism_all_partitions() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(6);
        for n in 1..=10usize {
            let m = random_mat2(&mut rng);
            let k = random_mat2(&mut rng);
            for lam in enumerate_partitions(n, 2).unwrap() {
                let lhs = irrep_q2(&m.matmul(&k), &lam).unwrap().matrix;
                let rhs =
                    irrep_q2(&m, &lam).unwrap().matrix.matmul(&irrep_q2(&k, &lam).unwrap().matrix);
                let scale = lhs.max_abs().max(1.0);
                assert!(lhs.max_abs_diff(&rhs) < 1e-9 * scale, "n={n} {lam}");
            }
        }
    }

    #[test]
    fn trace_identity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        for n in 1..=12usize {
            let m = random_mat2(&mut rng);
            let total: C64 = enumerate_partitions(n, 2)
                .unwrap()
                .iter()
                .map(|lam| {
                    let t = irrep_q2(&m, lam).unwrap().matrix.trace();
                    specht_dim(lam) as f64 * t
                })
                .sum();
            let expect = m.trace().powi(n as i32);
            assert!(
                (total - expect).norm() <= 1e-9 * expect.norm().max(1.0),
                "n={n}: {total} vs {expect}"
            );
        }
    }

    #[test]
    fn determinant_scaling_is_degree_n() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let m = random_mat2(&mut rng);
        let c = C64::new(0.37, -0.8);
        for lam in [p2(5, 0), p2(4, 1), p2(3, 2)] {
            let n = lam.n() as i32;
            let scaled = irrep_q2(&m.scale(c), &lam).unwrap().matrix;
            let expect = irrep_q2(&m, &lam).unwrap().matrix.scale(c.powi(n));
            assert!(scaled.max_abs_diff(&expect) < 1e-10 * expect.max_abs().max(1.0));
        }
    }

    #[test]
    fn unitary_input_gives_unitary_block() {
        // Haar-ish unitary from a random Hermitian exponential is overkill;
        // a parametrized SU(2) element suffices.
        let (th, ph, la) = (0.7f64, 1.9f64, -0.4f64);
        let u = Mat2([
            [
                C64::new((th / 2.0).cos(), 0.0),
                -(C64::new(0.0, la)).exp() * (th / 2.0).sin(),
            ],
            [
                (C64::new(0.0, ph)).exp() * (th / 2.0).sin(),
                (C64::new(0.0, ph + la)).exp() * (th / 2.0).cos(),
            ],
        ]);
        for lam in [p2(6, 0), p2(4, 2), p2(5, 1)] {
            let b = irrep_q2(&u, &lam).unwrap().matrix;
            let id = b.dagger().matmul(&b);
            assert!(id.max_abs_diff(&CMatrix::identity(lam.l() + 1)) < 1e-10);
        }
    }

    #[test]
    fn one_row_block_matches_symmetric_tensor_power() {
        // oracle: matrix elements of M^{⊗n} between Dicke states, built in the
        // computational basis
        let mut rng = rand::rngs::StdRng::seed_from_u64(10);
        for n in 1..=4usize {
            let m = random_mat2(&mut rng);
            let dim = 1usize << n;
            let mut full = vec![C64::zero(); dim * dim];
            for row in 0..dim {
                for col in 0..dim {
                    let mut prod = C64::one();
                    for q in 0..n {
                        let rb = (row >> q) & 1;
                        let cb = (col >> q) & 1;
                        prod *= m.0[rb][cb];
                    }
                    full[row * dim + col] = prod;
                }
            }
            let dicke = |k: usize| -> Vec<C64> {
                let norm = binomial(n, k).sqrt();
                (0..dim)
                    .map(|x| {
                        if (x as u32).count_ones() as usize == k {
                            C64::new(1.0 / norm, 0.0)
                        } else {
                            C64::zero()
                        }
                    })
                    .collect()
            };
            let blk = irrep_q2(&m, &p2(n as u16, 0)).unwrap().matrix;
            for r in 0..=n {
                let dr = dicke(r);
                for c in 0..=n {
                    let dc = dicke(c);
                    let mut elem = C64::zero();
                    for row in 0..dim {
                        for col in 0..dim {
                            elem += dr[row].conj() * full[row * dim + col] * dc[col];
                        }
                    }
                    assert!(
                        (blk[(r, c)] - elem).norm() < 1e-12,
                        "n={n} ({r},{c}): {} vs {elem}",
                        blk[(r, c)]
                    );
                }
            }
        }
    }

    #[test]
    fn singular_matrix_with_zero_det_power() {
        // rank-1 projector: det = 0, λ₂ = 0 block must still be finite
        let m = Mat2([[C64::one(), C64::zero()], [C64::zero(), C64::zero()]]);
        let b = irrep_q2(&m, &p2(3, 0)).unwrap().matrix;
        assert!((b[(0, 0)] - C64::one()).norm() < 1e-15);
        assert!(b.data().iter().all(|z| z.is_finite()));
        // λ₂ > 0 with singular M collapses to zero
        let b = irrep_q2(&m, &p2(2, 1)).unwrap().matrix;
        assert!(b.max_abs() < 1e-15);
    }
}
