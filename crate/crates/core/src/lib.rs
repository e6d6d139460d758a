//! Coherent information of mixed Pauli channels for rank-two inputs on the
//! symmetric subspace of `n` qubits.
//!
//! The crate computes `I_c(N^{⊗n}, ρ)` for `ρ = ½(|ψ₀⟩⟨ψ₀| + |ψ₁⟩⟨ψ₁|)` with
//! `ψ₀, ψ₁` in the symmetric subspace, without ever materializing `2^n`-dim
//! operators: the channel output block-diagonalizes over partitions `λ ⊢₂ n`
//! once the input is expanded in a tensor-power spanning set, and each block
//! is an `(l+1)`-dimensional image under the GL(2) irrep `q²_λ`. On top of the
//! evaluator sit a multi-start gradient ascent optimizer, a bisection search
//! for capacity thresholds, a brute-force dense oracle for cross-validation at
//! small `n`, and counting tools for the degeneracy structure of Pauli Kraus
//! operators restricted to the symmetric subspace (Schur polynomials, Kostka
//! numbers, Choi eigenvalue measures, strong typicality).
//!
//! The crate is `no_std` (with `alloc`): all numerics, including the Hermitian
//! eigensolver, are self-contained. IO, serialization and parallel orchestration
//! live in the companion `symcap` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod basis;
pub mod channel;
pub mod ci;
pub mod degen;
pub mod linalg;
pub mod optimizer;
pub mod oracle;
pub mod rep;
pub(crate) mod rng;

pub use num_complex::Complex64 as C64;

pub use basis::{QubitState, SpanningBasis};
pub use channel::{ChannelFamily, PauliChannel};
pub use ci::{BlockDecomposition, Precomputation, SymmetricInput};
pub use linalg::CMatrix;
pub use optimizer::{OptimizerConfig, ThresholdRecord};
pub use rep::{IrrepBlock, Mat2, Partition};
