//! Brute-force coherent information on dense `2^n`-dimensional operators.
//! Ground truth for the block-diagonal fast path at small `n`, plus dense
//! complementary-channel output for rank/degeneracy checks.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::channel::PauliChannel;
use crate::ci::SymmetricInput;
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues, simplex_project, CMatrix, LinalgError};
use crate::rep::binomial;

/// Dense coherent-information evaluations hold `4^{n+1}`-entry matrices.
pub const MAX_BRUTE_N: usize = 10;
/// The environment of `n` channel uses has up to `4^n` Kraus strings.
pub const MAX_COMPLEMENT_N: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("n={0} exceeds the dense-oracle cap {1}")]
    TooLarge(usize, usize),

    #[error("dimension {0} is not a density matrix on {1} qubits")]
    DimensionMismatch(usize, usize),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type OracleResult<T> = Result<T, OracleError>;

/// Purification of a rank-two symmetric input, as a dense state vector on
/// one reference qubit (most significant bit) and `n` channel qubits.
#[derive(Clone, Debug)]
pub struct DenseState {
    pub n: usize,
    pub purification: Vec<C64>,
}

/// Expand `(|0⟩|ψ₀⟩ + |1⟩|ψ₁⟩)/√2` into the computational basis, with each
/// Dicke coefficient spread uniformly over its Hamming-weight class.
pub fn build_purification(input: &SymmetricInput) -> OracleResult<DenseState> {
    let n = input.n();
    if n > MAX_BRUTE_N {
        return Err(OracleError::TooLarge(n, MAX_BRUTE_N));
    }
    let dim = 1usize << n;
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let norms: Vec<f64> = (0..=n).map(|k| binomial(n, k).sqrt()).collect();
    let mut vec = vec![C64::zero(); 2 * dim];
    for x in 0..dim {
        let k = (x as u32).count_ones() as usize;
        vec[x] = input.row(0)[k] / norms[k] * inv_sqrt2;
        vec[dim + x] = input.row(1)[k] / norms[k] * inv_sqrt2;
    }
    Ok(DenseState { n, purification: vec })
}

/// Apply the single-qubit channel to each of the listed qubits of a density
/// matrix on `total_qubits` (qubit 0 is the least significant bit). The
/// channel acts as `n` sequential single-qubit superoperators.
pub fn apply_channel_qubitwise(
    channel: &PauliChannel,
    rho: &CMatrix,
    total_qubits: usize,
    qubits: &[usize],
) -> OracleResult<CMatrix> {
    let dim = 1usize << total_qubits;
    if rho.rows() != dim || rho.cols() != dim {
        return Err(OracleError::DimensionMismatch(rho.rows(), total_qubits));
    }
    let mut out = rho.clone();
    for &q in qubits {
        debug_assert!(q < total_qubits);
        out = apply_one(channel, &out, q, dim);
    }
    Ok(out)
}

fn apply_one(channel: &PauliChannel, rho: &CMatrix, q: usize, dim: usize) -> CMatrix {
    let mask = 1usize << q;
    let [pi, px, py, pz] = channel.probabilities();
    CMatrix::from_fn(dim, dim, |r, c| {
        let rb = (r & mask) != 0;
        let cb = (c & mask) != 0;
        let z_sign = if rb != cb { -1.0 } else { 1.0 };
        let mut acc = (pi + z_sign * pz) * rho[(r, c)];
        if px != 0.0 || py != 0.0 {
            // X and Y both flip the bit; Y adds the same parity sign as Z
            acc += (px + z_sign * py) * rho[(r ^ mask, c ^ mask)];
        }
        acc
    })
}

/// Coherent information from the dense dilation: entropy of the channel
/// output minus entropy of the joint state with the untouched reference.
pub fn brute_ci(input: &SymmetricInput, channel: &PauliChannel) -> OracleResult<f64> {
    let n = input.n();
    let state = build_purification(input)?;
    let dim = 1usize << n;
    let joint0 = outer_product(&state.purification);
    let qubits: Vec<usize> = (0..n).collect();
    let joint = apply_channel_qubitwise(channel, &joint0, n + 1, &qubits)?;
    // output = partial trace over the reference (most significant bit)
    let out = CMatrix::from_fn(dim, dim, |r, c| joint[(r, c)] + joint[(dim + r, dim + c)]);
    Ok(entropy_of(&out)? - entropy_of(&joint)?)
}

/// Environment state of the channel on `rho`: `E[k₁,k₂] = tr(A_{k₁} ρ A†_{k₂})`
/// over all Kraus strings (zero-probability single-qubit Kraus operators are
/// dropped, so the 2-Pauli environment is `3^n`-dimensional).
pub fn complementary_output(rho: &CMatrix, channel: &PauliChannel, n: usize) -> OracleResult<CMatrix> {
    let v = environment_vectors(rho, channel, n)?;
    // E = V V†
    let strings = v.len();
    let mut e = CMatrix::zeros(strings, strings);
    for k1 in 0..strings {
        for k2 in 0..strings {
            let mut acc = C64::zero();
            for (a, b) in v[k1].iter().zip(&v[k2]) {
                acc += a * b.conj();
            }
            e[(k1, k2)] = acc;
        }
    }
    Ok(e)
}

/// Nonzero spectrum (descending) of the environment state, computed from the
/// Gram matrix `V†V`, which shares its nonzero eigenvalues with `E = VV†` but
/// is only `rank(ρ)·2^n`-dimensional.
pub fn complementary_spectrum(
    rho: &CMatrix,
    channel: &PauliChannel,
    n: usize,
) -> OracleResult<Vec<f64>> {
    let v = environment_vectors(rho, channel, n)?;
    let cols = v[0].len();
    let mut gram = CMatrix::zeros(cols, cols);
    for row in &v {
        for (i, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in row.iter().enumerate() {
                gram[(i, j)] += a.conj() * b;
            }
        }
    }
    let mut eigs = hermitian_eigenvalues(&gram.hermitized())?;
    eigs.reverse();
    Ok(eigs)
}

/// Rows `v_k = [√μ_1 A_k u_1; √μ_2 A_k u_2; …]` over eigenvectors `u_r` of
/// `ρ = Σ μ_r u_r u_r†`; the environment state is the Gram matrix of these.
fn environment_vectors(
    rho: &CMatrix,
    channel: &PauliChannel,
    n: usize,
) -> OracleResult<Vec<Vec<C64>>> {
    if n > MAX_COMPLEMENT_N {
        return Err(OracleError::TooLarge(n, MAX_COMPLEMENT_N));
    }
    let dim = 1usize << n;
    if rho.rows() != dim || rho.cols() != dim {
        return Err(OracleError::DimensionMismatch(rho.rows(), n));
    }
    let (vals, vecs) = hermitian_eigen(&rho.hermitized())?;
    let scale = vals.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let keep: Vec<usize> =
        (0..vals.len()).filter(|&i| vals[i] > 1e-14 * scale.max(1e-300)).collect();
    let kraus = channel.kraus_operators();
    let s = kraus.len();
    let strings = s.pow(n as u32);

    let mut rows = Vec::with_capacity(strings);
    let mut buf = vec![C64::zero(); dim];
    for code in 0..strings {
        let mut row = Vec::with_capacity(keep.len() * dim);
        for &r in &keep {
            let w = vals[r].max(0.0).sqrt();
            for (i, b) in buf.iter_mut().enumerate() {
                *b = vecs[(i, r)] * w;
            }
            apply_kraus_string(&kraus, code, n, &mut buf);
            row.extend_from_slice(&buf);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Apply the Kraus string indexed by `code` in base `kraus.len()` (digit `q`
/// addresses qubit `q`) to a dense vector in place.
fn apply_kraus_string(kraus: &[(f64, crate::rep::Mat2)], code: usize, n: usize, v: &mut [C64]) {
    let s = kraus.len();
    let mut c = code;
    for q in 0..n {
        let op = &kraus[c % s].1;
        c /= s;
        let mask = 1usize << q;
        // single-qubit 2x2 action on the dense vector
        for base in 0..v.len() {
            if base & mask != 0 {
                continue;
            }
            let lo = v[base];
            let hi = v[base | mask];
            v[base] = op.0[0][0] * lo + op.0[0][1] * hi;
            v[base | mask] = op.0[1][0] * lo + op.0[1][1] * hi;
        }
    }
}

fn outer_product(v: &[C64]) -> CMatrix {
    let d = v.len();
    CMatrix::from_fn(d, d, |r, c| v[r] * v[c].conj())
}

fn entropy_of(m: &CMatrix) -> OracleResult<f64> {
    let eigs = hermitian_eigenvalues(&m.hermitized())?;
    let probs = simplex_project(&eigs);
    Ok(-probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>())
}
