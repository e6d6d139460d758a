//! The fast path: precompute irrep blocks of channel-acted Dicke pair
//! operators once per `(channel, n, basis)`, then evaluate the coherent
//! information of any rank-two symmetric-subspace input from the
//! block-diagonal form.
//!
//! For each partition `λ ⊢₂ n` the channel output of a Dicke pair operator
//! block-diagonalizes as
//! `N^{⊗n}(|D_k⟩⟨D_l|) ≅ ⊕_λ I_{S_λ} ⊗ Σ_{a,b} β_{k,a} β*_{l,b} q²_λ(N(|φ_a⟩⟨φ_b|))`,
//! so the entropies of the output and of the joint state with the purifying
//! reference reduce to `(l+1)`- and `2(l+1)`-dimensional eigenproblems. The
//! total is `I_c = Σ_λ c_λ (S(σ_λ) − S(ω_λ))` in bits.

use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::basis::SpanningBasis;
use crate::channel::PauliChannel;
use crate::linalg::{hermitian_eigenvalues, simplex_project, CMatrix, LinalgError};
use crate::rep::{enumerate_partitions, irrep_q2, specht_dim_f64, Mat2, Partition, RepError};

/// Blocks whose total weight falls below this contribute nothing to the
/// entropy difference and are skipped to avoid 0/0 normalizations.
pub const BLOCK_CUTOFF: f64 = 1e-15;

/// Hermiticity tolerance for entropy inputs.
pub const HERMITICITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CiError {
    #[error("input has n={0} but the precomputation was built for n={1}")]
    SizeMismatch(usize, usize),

    #[error("alpha row {0} has norm {1} (must be 1 within 1e-10)")]
    RowNotNormalized(usize, f64),

    #[error("alpha rows must have n+1 entries")]
    BadShape,

    #[error("matrix deviates from Hermitian by {0:.3e}")]
    NotHermitian(f64),

    #[error("all blocks fell below the weight cutoff; output trace vanished")]
    VanishedOutput,

    #[error(transparent)]
    Rep(#[from] RepError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type CiResult<T> = Result<T, CiError>;

/// Rank-two symmetric-subspace input: Dicke coefficient rows of `|ψ₀⟩` and
/// `|ψ₁⟩` for `ρ = ½(|ψ₀⟩⟨ψ₀| + |ψ₁⟩⟨ψ₁|)`. The rows are unit vectors but
/// need not be orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricInput {
    n: usize,
    alpha: [Vec<C64>; 2],
}

impl SymmetricInput {
    pub fn new(alpha0: Vec<C64>, alpha1: Vec<C64>) -> CiResult<Self> {
        if alpha0.len() != alpha1.len() || alpha0.is_empty() {
            return Err(CiError::BadShape);
        }
        let n = alpha0.len() - 1;
        for (idx, row) in [&alpha0, &alpha1].into_iter().enumerate() {
            let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(CiError::RowNotNormalized(idx, norm));
            }
        }
        Ok(SymmetricInput { n, alpha: [alpha0, alpha1] })
    }

    /// Build from unnormalized rows, normalizing each.
    pub fn normalized(mut alpha0: Vec<C64>, mut alpha1: Vec<C64>) -> CiResult<Self> {
        for row in [&mut alpha0, &mut alpha1] {
            let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(CiError::RowNotNormalized(0, 0.0));
            }
            for z in row.iter_mut() {
                *z /= norm;
            }
        }
        SymmetricInput::new(alpha0, alpha1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.alpha[i]
    }
}

/// Per-partition cache: the irrep images `Q[a][b] = q²_λ(N(|φ_a⟩⟨φ_b|))` and
/// the Dicke-pair channel blocks `ND[k][l]`, both stored row-major over the
/// `(n+1)²` index pairs.
#[derive(Clone, Debug)]
pub struct LambdaData {
    pub lambda: Partition,
    pub dim_specht: f64,
    n1: usize,
    pub q: Vec<CMatrix>,
    pub nd: Vec<CMatrix>,
}

impl LambdaData {
    pub fn block_dim(&self) -> usize {
        self.lambda.l() + 1
    }

    pub fn q_at(&self, a: usize, b: usize) -> &CMatrix {
        &self.q[a * self.n1 + b]
    }

    pub fn nd_at(&self, k: usize, l: usize) -> &CMatrix {
        &self.nd[k * self.n1 + l]
    }
}

/// Cache of all per-partition blocks for one `(channel, n, spanning basis)`.
#[derive(Clone, Debug)]
pub struct Precomputation {
    channel: PauliChannel,
    n: usize,
    basis: SpanningBasis,
    lambdas: Vec<LambdaData>,
}

impl Precomputation {
    pub fn channel(&self) -> &PauliChannel {
        &self.channel
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &SpanningBasis {
        &self.basis
    }

    pub fn lambdas(&self) -> &[LambdaData] {
        &self.lambdas
    }

    /// Assemble from independently computed per-partition pieces (the pieces
    /// must cover exactly the partitions of `n` in enumeration order).
    pub fn from_parts(
        channel: PauliChannel,
        n: usize,
        basis: SpanningBasis,
        lambdas: Vec<LambdaData>,
    ) -> Self {
        debug_assert_eq!(lambdas.len(), enumerate_partitions(n, 2).unwrap().len());
        Precomputation { channel, n, basis, lambdas }
    }
}

/// Compute the per-partition blocks for a single `λ`. Pure; the driver may
/// fan these out across workers and reassemble with [`Precomputation::from_parts`].
pub fn lambda_data(
    channel: &PauliChannel,
    n: usize,
    basis: &SpanningBasis,
    lambda: &Partition,
) -> CiResult<LambdaData> {
    let n1 = n + 1;
    let dim = lambda.l() + 1;
    let states = basis.states();

    // Q[a][b] = q²_λ(N(|φ_a⟩⟨φ_b|))
    let mut q = Vec::with_capacity(n1 * n1);
    for a in 0..n1 {
        for b in 0..n1 {
            let sa = &states[a];
            let sb = &states[b];
            let outer = Mat2([
                [sa.c0 * sb.c0.conj(), sa.c0 * sb.c1.conj()],
                [sa.c1 * sb.c0.conj(), sa.c1 * sb.c1.conj()],
            ]);
            q.push(irrep_q2(&channel.apply_single(&outer), lambda)?.matrix);
        }
    }

    // ND[k][l] = Σ_{a,b} β[k][a] β*[l][b] Q[a][b], contracted one index at a
    // time: T[k][b] = Σ_a β[k][a] Q[a][b], then ND[k][l] = Σ_b β*[l][b] T[k][b].
    let beta = basis.beta();
    let mut t: Vec<CMatrix> = Vec::with_capacity(n1 * n1);
    for k in 0..n1 {
        for b in 0..n1 {
            let mut acc = CMatrix::zeros(dim, dim);
            for a in 0..n1 {
                let w = beta[(k, a)];
                if w.is_zero() {
                    continue;
                }
                acc.add_scaled(w, &q[a * n1 + b]);
            }
            t.push(acc);
        }
    }
    let mut nd: Vec<CMatrix> = Vec::with_capacity(n1 * n1);
    for k in 0..n1 {
        for l in 0..n1 {
            let mut acc = CMatrix::zeros(dim, dim);
            for b in 0..n1 {
                let w = beta[(l, b)].conj();
                if w.is_zero() {
                    continue;
                }
                acc.add_scaled(w, &t[k * n1 + b]);
            }
            nd.push(acc);
        }
    }

    Ok(LambdaData { lambda: lambda.clone(), dim_specht: specht_dim_f64(lambda), n1, q, nd })
}

/// Precompute all blocks for `(channel, n, basis)`, sequentially over `λ`.
pub fn precompute(
    channel: &PauliChannel,
    n: usize,
    basis: &SpanningBasis,
) -> CiResult<Precomputation> {
    let lambdas = enumerate_partitions(n, 2)?
        .iter()
        .map(|lam| lambda_data(channel, n, basis, lam))
        .collect::<CiResult<Vec<_>>>()?;
    Ok(Precomputation { channel: *channel, n, basis: basis.clone(), lambdas })
}

/// One partition's share of the block-diagonal output: the weight `c_λ`, the
/// output block `σ_λ` and the joint block `ω_λ` (both normalized to trace 1).
#[derive(Clone, Debug)]
pub struct LambdaBlock {
    pub lambda: Partition,
    pub c: f64,
    pub sigma: CMatrix,
    pub omega: CMatrix,
}

/// Block decomposition of the channel output for one input.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub blocks: Vec<LambdaBlock>,
}

/// Raw (unnormalized) blocks paired with their weights. Internal: shared by
/// the evaluator and the analytic gradient.
struct RawBlocks {
    per_lambda: Vec<(usize, f64, CMatrix, CMatrix)>, // (lambda index, qbar, sigma_un, omega_un)
}

fn raw_blocks(input: &SymmetricInput, pre: &Precomputation) -> CiResult<RawBlocks> {
    if input.n() != pre.n {
        return Err(CiError::SizeMismatch(input.n(), pre.n));
    }
    let n1 = pre.n + 1;
    let mut per_lambda = Vec::with_capacity(pre.lambdas.len());
    for (idx, ld) in pre.lambdas.iter().enumerate() {
        let dim = ld.block_dim();
        // U[i][l] = Σ_k α_i[k] ND[k][l]
        let mut u = [Vec::with_capacity(n1), Vec::with_capacity(n1)];
        for (i, u_i) in u.iter_mut().enumerate() {
            for l in 0..n1 {
                let mut acc = CMatrix::zeros(dim, dim);
                for k in 0..n1 {
                    let w = input.alpha[i][k];
                    if w.is_zero() {
                        continue;
                    }
                    acc.add_scaled(w, ld.nd_at(k, l));
                }
                u_i.push(acc);
            }
        }
        // ω(i,j) = ½ Σ_l conj(α_j[l]) U[i][l]; σ = ω(0,0) + ω(1,1)
        let mut w_blocks = [[CMatrix::zeros(dim, dim), CMatrix::zeros(dim, dim)],
            [CMatrix::zeros(dim, dim), CMatrix::zeros(dim, dim)]];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = CMatrix::zeros(dim, dim);
                for l in 0..n1 {
                    let w = input.alpha[j][l].conj();
                    if w.is_zero() {
                        continue;
                    }
                    acc.add_scaled(w, &u[i][l]);
                }
                w_blocks[i][j] = acc.scale(C64::new(0.5, 0.0));
            }
        }
        let sigma_un = w_blocks[0][0].add(&w_blocks[1][1]);
        let mut omega_un = CMatrix::zeros(2 * dim, 2 * dim);
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..dim {
                    for c in 0..dim {
                        omega_un[(i * dim + r, j * dim + c)] = w_blocks[i][j][(r, c)];
                    }
                }
            }
        }
        let qbar = sigma_un.trace().re;
        per_lambda.push((idx, qbar, sigma_un, omega_un));
    }
    Ok(RawBlocks { per_lambda })
}

/// Decompose the channel output of `input` into normalized per-`λ` blocks.
/// Blocks with `c_λ` below [`BLOCK_CUTOFF`] are dropped.
pub fn block_decomposition(
    input: &SymmetricInput,
    pre: &Precomputation,
) -> CiResult<BlockDecomposition> {
    let raw = raw_blocks(input, pre)?;
    let mut blocks = Vec::new();
    for (idx, qbar, sigma_un, omega_un) in raw.per_lambda {
        let ld = &pre.lambdas[idx];
        let c = qbar * ld.dim_specht;
        if c < BLOCK_CUTOFF {
            continue;
        }
        let inv = C64::new(1.0 / qbar, 0.0);
        blocks.push(LambdaBlock {
            lambda: ld.lambda.clone(),
            c,
            sigma: sigma_un.scale(inv).hermitized(),
            omega: omega_un.scale(inv).hermitized(),
        });
    }
    if blocks.is_empty() {
        return Err(CiError::VanishedOutput);
    }
    Ok(BlockDecomposition { blocks })
}

/// Von Neumann entropy in bits of a Hermitian, trace-one-intended matrix:
/// eigenvalues are projected onto the probability simplex before the Shannon
/// sum, which is how small negative round-off eigenvalues are handled.
pub fn entropy_bits(m: &CMatrix) -> CiResult<f64> {
    let dev = m.hermiticity_error();
    if dev > HERMITICITY_TOL {
        return Err(CiError::NotHermitian(dev));
    }
    let eigs = hermitian_eigenvalues(&m.hermitized())?;
    let probs = simplex_project(&eigs);
    Ok(shannon(&probs))
}

fn shannon(ps: &[f64]) -> f64 {
    -ps.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// Coherent information `Σ_λ c_λ (S(σ_λ) − S(ω_λ))` in bits, total over the
/// `n` uses (callers divide by `n` for a rate).
pub fn evaluate_ci(input: &SymmetricInput, pre: &Precomputation) -> CiResult<f64> {
    let dec = block_decomposition(input, pre)?;
    let mut total = 0.0;
    for b in &dec.blocks {
        total += b.c * (entropy_bits(&b.sigma)? - entropy_bits(&b.omega)?);
    }
    Ok(total)
}

/// Compensated (Kahan) re-evaluation of the coherent information. The block
/// assembly is identical; only the scalar accumulations differ, which gives
/// an independent rounding profile for cross-checking the double-precision
/// value at the 1e-10 level.
pub fn evaluate_ci_compensated(input: &SymmetricInput, pre: &Precomputation) -> CiResult<f64> {
    let dec = block_decomposition(input, pre)?;
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for b in &dec.blocks {
        let term = b.c * (entropy_kahan(&b.sigma)? - entropy_kahan(&b.omega)?);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

fn entropy_kahan(m: &CMatrix) -> CiResult<f64> {
    let dev = m.hermiticity_error();
    if dev > HERMITICITY_TOL {
        return Err(CiError::NotHermitian(dev));
    }
    let eigs = hermitian_eigenvalues(&m.hermitized())?;
    let probs = simplex_project(&eigs);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &p in probs.iter().filter(|&&p| p > 0.0) {
        let term = -p * p.log2();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// Objective value and its Euclidean gradient with respect to the real and
/// imaginary parts of the (unit-row) coefficient matrix, with the radial
/// components projected out so that the gradient lives on the product of unit
/// spheres — the same objective the finite-difference path differentiates.
///
/// Uses `d tr(B log B) = tr((log B + I/ln 2)·dB)` per block; zero eigenvalues
/// are floored far below the block cutoff, which only caps the magnitude of
/// an ascent direction that is already pointing away from the boundary.
pub fn ci_and_gradient(
    input: &SymmetricInput,
    pre: &Precomputation,
) -> CiResult<(f64, [Vec<C64>; 2])> {
    let raw = raw_blocks(input, pre)?;
    let n1 = pre.n + 1;
    let mut value = 0.0f64;
    let mut grad = [alloc::vec![C64::zero(); n1], alloc::vec![C64::zero(); n1]];
    let mut any = false;

    for (idx, qbar, sigma_un, omega_un) in &raw.per_lambda {
        let ld = &pre.lambdas[*idx];
        let d_lam = ld.dim_specht;
        let c = qbar * d_lam;
        if c < BLOCK_CUTOFF {
            continue;
        }
        any = true;
        let dim = ld.block_dim();

        // value: c_λ (S(σ) − S(ω)) = d_λ (h(Bω) − h(Bσ)), h(B) = tr(B log₂ B),
        // and the gradient factor G = log₂ B + I/ln2 from the same eigensystem
        let (h_sigma, g_sigma) = h_and_log_factor(sigma_un)?;
        let (h_omega, g_omega) = h_and_log_factor(omega_un)?;
        value += d_lam * (h_omega - h_sigma);

        // T[i][l] = Σ_k α_i[k] ND[k][l]  (same contraction as the evaluator)
        let mut t = [Vec::with_capacity(n1), Vec::with_capacity(n1)];
        for (i, t_i) in t.iter_mut().enumerate() {
            for l in 0..n1 {
                let mut acc = CMatrix::zeros(dim, dim);
                for k in 0..n1 {
                    let w = input.alpha[i][k];
                    if w.is_zero() {
                        continue;
                    }
                    acc.add_scaled(w, ld.nd_at(k, l));
                }
                t_i.push(acc);
            }
        }

        // ∂F/∂conj(α_j[l]) = d_λ ½ [ Σ_r tr(Gω[j,r]·T[r][l]) − tr(Gσ·T[j][l]) ]
        for j in 0..2 {
            for l in 0..n1 {
                let mut w_term = C64::zero();
                for r in 0..2 {
                    w_term += block_trace_product(&g_omega, j, r, dim, &t[r][l]);
                }
                let s_term = trace_product(&g_sigma, &t[j][l]);
                grad[j][l] += d_lam * 0.5 * (w_term - s_term);
            }
        }
    }
    if !any {
        return Err(CiError::VanishedOutput);
    }

    // Wirtinger → real gradient is 2·conj-derivative; then project out the
    // radial direction per row (rows are constrained to the unit sphere).
    for (i, g_row) in grad.iter_mut().enumerate() {
        for z in g_row.iter_mut() {
            *z *= 2.0;
        }
        let radial: f64 =
            g_row.iter().zip(&input.alpha[i]).map(|(g, a)| (a.conj() * g).re).sum();
        for (g, a) in g_row.iter_mut().zip(&input.alpha[i]) {
            *g -= radial * a;
        }
    }
    Ok((value, grad))
}

/// `tr(B log₂ B)` and `log₂(B) + I/ln2` from one eigendecomposition of an
/// unnormalized PSD-intended block; eigenvalues floored far below the cutoff.
fn h_and_log_factor(b: &CMatrix) -> CiResult<(f64, CMatrix)> {
    let (vals, vecs) = crate::linalg::hermitian_eigen(&b.hermitized())?;
    let dim = vals.len();
    let ln2 = core::f64::consts::LN_2;
    let h: f64 = vals.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum();
    let mut out = CMatrix::zeros(dim, dim);
    for (k, &v) in vals.iter().enumerate() {
        let f = v.max(1e-300).log2() + 1.0 / ln2;
        for r in 0..dim {
            let vr = vecs[(r, k)] * f;
            for c in 0..dim {
                out[(r, c)] += vr * vecs[(c, k)].conj();
            }
        }
    }
    Ok((h, out))
}

/// `tr(G[j,r] · T)` where `G` is a 2×2 supermatrix of `dim×dim` blocks.
fn block_trace_product(g: &CMatrix, j: usize, r: usize, dim: usize, t: &CMatrix) -> C64 {
    let mut acc = C64::zero();
    for a in 0..dim {
        for b in 0..dim {
            acc += g[(j * dim + a, r * dim + b)] * t[(b, a)];
        }
    }
    acc
}

fn trace_product(g: &CMatrix, t: &CMatrix) -> C64 {
    let dim = t.rows();
    let mut acc = C64::zero();
    for a in 0..dim {
        for b in 0..dim {
            acc += g[(a, b)] * t[(b, a)];
        }
    }
    acc
}
