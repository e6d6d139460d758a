//! Dicke-basis handling and the change of basis between Dicke states and a
//! tensor-power spanning set `{|φ_j⟩^{⊗n}}`.
//!
//! The `n+1` single-qubit states are placed deterministically from a seed:
//! a Fibonacci-sphere arrangement of Bloch vectors, rotated by a seeded global
//! rotation, then polished by local moves that shrink the largest pairwise
//! overlap. Well-spread states keep the overlap matrix
//! `A[k][j] = ⟨D_k^n | φ_j^{⊗n}⟩` well conditioned, which is what bounds the
//! error of everything downstream.

use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::Float;
use thiserror::Error;

use crate::linalg::{condition_number, solve_qr_colpivot, CMatrix, LinalgError};
use crate::rep::{binomial, MAX_N};
use crate::rng::Rng;

/// Retries with fresh seeds before giving up on the conditioning ceiling.
const MAX_RETRIES: u64 = 8;
/// Construction fails if no retry gets the overlap matrix below this.
const CONDITION_CEILING: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error("n must be at least 1 (got {0})")]
    DomainN(usize),

    #[error("n exceeds the supported maximum {MAX_N} (got {0})")]
    TooLarge(usize),

    #[error("overlap matrix condition number {0:.3e} exceeds {CONDITION_CEILING:.0e} after {MAX_RETRIES} retries")]
    IllConditioned(f64),

    #[error("spanning states are numerically collinear: {0}")]
    Singular(#[from] LinalgError),
}

pub type BasisResult<T> = Result<T, BasisError>;

/// Single-qubit pure state `c0|0⟩ + c1|1⟩`, unit norm.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct QubitState {
    pub c0: C64,
    pub c1: C64,
}

impl QubitState {
    pub fn new(c0: C64, c1: C64) -> Self {
        let norm = (c0.norm_sqr() + c1.norm_sqr()).sqrt();
        QubitState { c0: c0 / norm, c1: c1 / norm }
    }

    pub fn from_bloch(theta: f64, phi: f64) -> Self {
        QubitState {
            c0: C64::new((theta / 2.0).cos(), 0.0),
            c1: C64::new(0.0, phi).exp() * (theta / 2.0).sin(),
        }
    }

    pub fn overlap(&self, other: &QubitState) -> C64 {
        self.c0.conj() * other.c0 + self.c1.conj() * other.c1
    }
}

/// `⟨D_k^n | φ^{⊗n}⟩ = sqrt(C(n,k)) c0^{n−k} c1^k`.
pub fn dicke_overlap(n: usize, k: usize, phi: &QubitState) -> C64 {
    debug_assert!(k <= n);
    binomial(n, k).sqrt() * phi.c0.powi((n - k) as i32) * phi.c1.powi(k as i32)
}

/// A tensor-power spanning set for the symmetric subspace together with the
/// Dicke-basis change-of-basis data.
#[derive(Clone, Debug)]
pub struct SpanningBasis {
    n: usize,
    seed: u64,
    states: Vec<QubitState>,
    overlap: CMatrix,
    beta: CMatrix,
    condition_number: f64,
}

impl SpanningBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn states(&self) -> &[QubitState] {
        &self.states
    }

    /// Overlap matrix `A[k][j] = ⟨D_k^n | φ_j^{⊗n}⟩`, `(n+1)×(n+1)`.
    pub fn overlap_matrix(&self) -> &CMatrix {
        &self.overlap
    }

    /// Expansion coefficients: `|D_i^n⟩ = Σ_j β[i][j] |φ_j⟩^{⊗n}`.
    pub fn beta(&self) -> &CMatrix {
        &self.beta
    }

    pub fn condition_number(&self) -> f64 {
        self.condition_number
    }

    /// Rebuild from previously chosen states (e.g. a persisted basis). The
    /// derived matrices are recomputed, deterministically.
    pub fn from_states(n: usize, seed: u64, states: Vec<QubitState>) -> BasisResult<Self> {
        assert_eq!(states.len(), n + 1, "need n+1 spanning states");
        let overlap = overlap_matrix(n, &states);
        let beta = expansion_coefficients(&overlap)?;
        let condition_number = condition_number(&overlap)?;
        Ok(SpanningBasis { n, seed, states, overlap, beta, condition_number })
    }
}

/// Deterministically choose `n+1` well-spread spanning states for the given
/// seed, with conditioning retries.
pub fn choose_spanning_states(n: usize, seed: u64) -> BasisResult<SpanningBasis> {
    if n == 0 {
        return Err(BasisError::DomainN(0));
    }
    if n > MAX_N {
        return Err(BasisError::TooLarge(n));
    }
    let mut best_seen = f64::INFINITY;
    for retry in 0..MAX_RETRIES {
        let states = well_spread_states(n, seed, retry);
        let overlap = overlap_matrix(n, &states);
        let cond = condition_number(&overlap)?;
        if cond <= CONDITION_CEILING {
            let beta = expansion_coefficients(&overlap)?;
            return Ok(SpanningBasis { n, seed, states, overlap, beta, condition_number: cond });
        }
        best_seen = best_seen.min(cond);
    }
    Err(BasisError::IllConditioned(best_seen))
}

/// Solve for the expansion coefficients from the overlap matrix: `β` satisfies
/// `A βᵀ = I`, so applying `β` to the tensor-power coordinate vectors recovers
/// the Dicke unit vectors.
pub fn expansion_coefficients(overlap: &CMatrix) -> Result<CMatrix, LinalgError> {
    let n1 = overlap.rows();
    let inv = solve_qr_colpivot(overlap, &CMatrix::identity(n1))?;
    Ok(inv.transpose())
}

fn overlap_matrix(n: usize, states: &[QubitState]) -> CMatrix {
    CMatrix::from_fn(n + 1, n + 1, |k, j| dicke_overlap(n, k, &states[j]))
}

fn well_spread_states(n: usize, seed: u64, retry: u64) -> Vec<QubitState> {
    let count = n + 1;
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut bloch: Vec<[f64; 3]> = (0..count)
        .map(|j| {
            let z = 1.0 - 2.0 * (j as f64 + 0.5) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = 2.0 * core::f64::consts::PI * (j as f64) / golden;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect();

    // seeded global rotation decorrelates bases across seeds and retries
    let mut rng = Rng::seed_from(seed, 0xba51_5000 + retry);
    let rot = random_rotation(&mut rng);
    for v in bloch.iter_mut() {
        *v = apply_rotation(&rot, v);
    }

    polish(&mut bloch);
    bloch.iter().map(bloch_to_state).collect()
}

/// Local coordinate descent on the largest pairwise squared overlap
/// `(1 + u·v)/2`: each point in turn tries tangent moves with a shrinking
/// step, keeping those that reduce the maximum. Deterministic.
fn polish(bloch: &mut [[f64; 3]]) {
    let count = bloch.len();
    if count < 3 {
        return;
    }
    let mut current = max_pair_overlap_sq(bloch);
    let mut step = 0.25;
    const DIRS: [[f64; 2]; 8] = [
        [1.0, 0.0],
        [-1.0, 0.0],
        [0.0, 1.0],
        [0.0, -1.0],
        [0.7, 0.7],
        [-0.7, 0.7],
        [0.7, -0.7],
        [-0.7, -0.7],
    ];
    for _pass in 0..4 {
        for j in 0..count {
            let (t1, t2) = tangent_basis(&bloch[j]);
            for dir in DIRS {
                let old = bloch[j];
                let cand = normalize([
                    old[0] + step * (dir[0] * t1[0] + dir[1] * t2[0]),
                    old[1] + step * (dir[0] * t1[1] + dir[1] * t2[1]),
                    old[2] + step * (dir[0] * t1[2] + dir[1] * t2[2]),
                ]);
                bloch[j] = cand;
                let cost = max_pair_overlap_sq(bloch);
                if cost < current {
                    current = cost;
                } else {
                    bloch[j] = old;
                }
            }
        }
        step *= 0.35;
    }
}

fn max_pair_overlap_sq(bloch: &[[f64; 3]]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..bloch.len() {
        for j in i + 1..bloch.len() {
            let d = dot(&bloch[i], &bloch[j]);
            worst = worst.max((1.0 + d) / 2.0);
        }
    }
    worst
}

fn tangent_basis(v: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let axis = if v[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let t1 = normalize(cross(v, &axis));
    let t2 = cross(v, &t1);
    (t1, t2)
}

fn bloch_to_state(v: &[f64; 3]) -> QubitState {
    let theta = v[2].clamp(-1.0, 1.0).acos();
    let phi = v[1].atan2(v[0]);
    QubitState::from_bloch(theta, phi)
}

fn random_rotation(rng: &mut Rng) -> [[f64; 3]; 3] {
    let (a, b, c) = (
        rng.uniform_in(0.0, core::f64::consts::TAU),
        rng.uniform_in(0.0, core::f64::consts::TAU),
        rng.uniform_in(0.0, core::f64::consts::TAU),
    );
    let rz = |t: f64| [[t.cos(), -t.sin(), 0.0], [t.sin(), t.cos(), 0.0], [0.0, 0.0, 1.0]];
    let ry = |t: f64| [[t.cos(), 0.0, t.sin()], [0.0, 1.0, 0.0], [-t.sin(), 0.0, t.cos()]];
    mat3_mul(&rz(a), &mat3_mul(&ry(b), &rz(c)))
}

fn mat3_mul(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

fn apply_rotation(r: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for k in 0..3 {
            out[i] += r[i][k] * v[k];
        }
    }
    out
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(&v, &v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}
