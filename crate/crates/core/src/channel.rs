//! Mixed Pauli channels: the three studied one-parameter families, the action
//! on arbitrary 2×2 matrices, Choi matrix, Kraus operators, and the hashing
//! rate of a single use.

use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::{Float, One};
use thiserror::Error;

use crate::linalg::CMatrix;
use crate::rep::Mat2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("probabilities must be non-negative and sum to 1 (sum deviates by {0:.3e})")]
    NotADistribution(f64),

    #[error("parameter p={0} outside the valid range [{1}, {2}] for {3}")]
    ParameterRange(f64, f64, f64, &'static str),

    #[error("unknown channel family `{0}`")]
    UnknownFamily(String),
}

pub type ChannelResult<T> = Result<T, ChannelError>;

pub const PAULI_I: Mat2 = Mat2([
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
]);
pub const PAULI_X: Mat2 = Mat2([
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
]);
pub const PAULI_Y: Mat2 = Mat2([
    [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
    [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
]);
pub const PAULI_Z: Mat2 = Mat2([
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)],
]);

/// Probability 4-vector `(p_I, p_X, p_Y, p_Z)` defining the noise model
/// `ρ ↦ p_I ρ + p_X XρX + p_Y YρY + p_Z ZρZ`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PauliChannel {
    pub p_i: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
}

impl PauliChannel {
    pub fn new(p_i: f64, p_x: f64, p_y: f64, p_z: f64) -> ChannelResult<Self> {
        let dev = (p_i + p_x + p_y + p_z - 1.0).abs();
        if dev > 1e-12 || p_i < 0.0 || p_x < 0.0 || p_y < 0.0 || p_z < 0.0 {
            return Err(ChannelError::NotADistribution(dev));
        }
        Ok(PauliChannel { p_i, p_x, p_y, p_z })
    }

    pub fn identity() -> Self {
        PauliChannel { p_i: 1.0, p_x: 0.0, p_y: 0.0, p_z: 0.0 }
    }

    pub fn probabilities(&self) -> [f64; 4] {
        [self.p_i, self.p_x, self.p_y, self.p_z]
    }

    /// Linear extension of the Pauli mixing action to arbitrary (not
    /// necessarily Hermitian) 2×2 matrices.
    pub fn apply_single(&self, m: &Mat2) -> Mat2 {
        let mut out = m.scale(C64::new(self.p_i, 0.0));
        for (w, p) in [(self.p_x, PAULI_X), (self.p_y, PAULI_Y), (self.p_z, PAULI_Z)] {
            if w == 0.0 {
                continue;
            }
            out = out.add(&p.matmul(m).matmul(&p).scale(C64::new(w, 0.0)));
        }
        out
    }

    /// Choi matrix `(I ⊗ N)(Φ)` with `Φ` the normalized maximally entangled
    /// projector; Bell-diagonal with spectrum equal to the probability vector.
    pub fn choi(&self) -> CMatrix {
        let mut j = CMatrix::zeros(4, 4);
        // Φ = ½ Σ_{rc} |rr⟩⟨cc|; second factor goes through the channel
        for r in 0..2 {
            for c in 0..2 {
                let mut e = Mat2::zero();
                e.0[r][c] = C64::one();
                let ne = self.apply_single(&e);
                for i in 0..2 {
                    for k in 0..2 {
                        j[(r * 2 + i, c * 2 + k)] += 0.5 * ne.0[i][k];
                    }
                }
            }
        }
        j
    }

    /// Kraus operators `{√p_σ · σ}` with zero-weight entries omitted, paired
    /// with their probabilities.
    pub fn kraus_operators(&self) -> Vec<(f64, Mat2)> {
        [
            (self.p_i, PAULI_I),
            (self.p_x, PAULI_X),
            (self.p_y, PAULI_Y),
            (self.p_z, PAULI_Z),
        ]
        .into_iter()
        .filter(|(w, _)| *w > 0.0)
        .map(|(w, p)| (w, p.scale(C64::new(w.sqrt(), 0.0))))
        .collect()
    }

    /// Coherent information of a single use on the maximally mixed input:
    /// `1 − H(p_I, p_X, p_Y, p_Z)` in bits.
    pub fn hashing_ci(&self) -> f64 {
        1.0 - shannon_bits(&self.probabilities())
    }
}

/// Shannon entropy in bits with the `0·log 0 = 0` convention.
pub fn shannon_bits(ps: &[f64]) -> f64 {
    -ps.iter().filter(|&&p| p > 0.0).map(|&p| p * p.log2()).sum::<f64>()
}

/// The three one-parameter channel families studied here.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ChannelFamily {
    /// `(1−3p, p, p, p)`, `p ∈ [0, 1/3]`.
    Depolarizing,
    /// `((1−p)², p(1−p), p², p(1−p))`, `p ∈ [0, 1]`.
    IndependentXz,
    /// `(1−2p, p, 0, p)`, `p ∈ [0, 1/2]`.
    TwoPauli,
}

impl ChannelFamily {
    pub fn channel(&self, p: f64) -> ChannelResult<PauliChannel> {
        let (lo, hi) = self.parameter_range();
        if !(lo..=hi).contains(&p) {
            return Err(ChannelError::ParameterRange(p, lo, hi, self.name()));
        }
        let probs = match self {
            ChannelFamily::Depolarizing => [1.0 - 3.0 * p, p, p, p],
            ChannelFamily::IndependentXz => {
                [(1.0 - p) * (1.0 - p), p * (1.0 - p), p * p, p * (1.0 - p)]
            }
            ChannelFamily::TwoPauli => [1.0 - 2.0 * p, p, 0.0, p],
        };
        PauliChannel::new(probs[0], probs[1], probs[2], probs[3])
    }

    pub fn parameter_range(&self) -> (f64, f64) {
        match self {
            ChannelFamily::Depolarizing => (0.0, 1.0 / 3.0),
            ChannelFamily::IndependentXz => (0.0, 1.0),
            ChannelFamily::TwoPauli => (0.0, 0.5),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Depolarizing => "dep",
            ChannelFamily::IndependentXz => "xz",
            ChannelFamily::TwoPauli => "2pauli",
        }
    }

    pub fn parse(s: &str) -> ChannelResult<Self> {
        match s {
            "dep" | "depolarizing" => Ok(ChannelFamily::Depolarizing),
            "xz" | "independent_xz" => Ok(ChannelFamily::IndependentXz),
            "2pauli" | "two_pauli" => Ok(ChannelFamily::TwoPauli),
            other => Err(ChannelError::UnknownFamily(String::from(other))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigenvalues;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_channel_is_identity_map() {
        let ch = ChannelFamily::Depolarizing.channel(0.0).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let mut z = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let m = Mat2([[z(), z()], [z(), z()]]);
        let out = ch.apply_single(&m);
        for i in 0..2 {
            for j in 0..2 {
                assert!((out.0[i][j] - m.0[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn channels_are_unital() {
        for (fam, p) in [
            (ChannelFamily::Depolarizing, 0.2),
            (ChannelFamily::IndependentXz, 0.3),
            (ChannelFamily::TwoPauli, 0.25),
        ] {
            let ch = fam.channel(p).unwrap();
            let half = Mat2::identity().scale(C64::new(0.5, 0.0));
            let out = ch.apply_single(&half);
            assert!((out.0[0][0] - C64::new(0.5, 0.0)).norm() < 1e-15);
            assert!((out.0[1][1] - C64::new(0.5, 0.0)).norm() < 1e-15);
            assert!(out.0[0][1].norm() < 1e-15 && out.0[1][0].norm() < 1e-15);
        }
    }

    #[test]
    fn depolarizing_on_computational_projector() {
        let p = 0.07;
        let ch = ChannelFamily::Depolarizing.channel(p).unwrap();
        let mut proj = Mat2::zero();
        proj.0[0][0] = C64::one();
        let out = ch.apply_single(&proj);
        assert!((out.0[0][0].re - (1.0 - 2.0 * p)).abs() < 1e-14);
        assert!((out.0[1][1].re - 2.0 * p).abs() < 1e-14);
    }

    #[test]
    fn apply_single_preserves_trace_hermiticity_psd() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let ch = ChannelFamily::IndependentXz.channel(0.23).unwrap();
        for _ in 0..50 {
            // random PSD: v v† + w w†
            let mut z = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (v, w) = ([z(), z()], [z(), z()]);
            let mut m = Mat2::zero();
            for i in 0..2 {
                for j in 0..2 {
                    m.0[i][j] = v[i] * v[j].conj() + w[i] * w[j].conj();
                }
            }
            let out = ch.apply_single(&m);
            assert!((out.trace() - m.trace()).norm() < 1e-13);
            assert!((out.0[0][1] - out.0[1][0].conj()).norm() < 1e-13);
            let disc = ((out.0[0][0] - out.0[1][1]).norm_sqr() / 4.0
                + out.0[0][1].norm_sqr())
            .sqrt();
            let mean = (out.0[0][0] + out.0[1][1]).re / 2.0;
            assert!(mean - disc >= -1e-12, "negative eigenvalue");
        }
    }

    #[test]
    fn choi_spectrum_equals_probability_vector() {
        for (fam, ps) in [
            (ChannelFamily::Depolarizing, [0.05, 0.1, 0.2, 1.0 / 3.0]),
            (ChannelFamily::IndependentXz, [0.05, 0.3, 0.6, 1.0]),
            (ChannelFamily::TwoPauli, [0.05, 0.2, 0.35, 0.5]),
        ] {
            for p in ps {
                let ch = fam.channel(p).unwrap();
                let eigs = hermitian_eigenvalues(&ch.choi()).unwrap();
                let mut probs = ch.probabilities().to_vec();
                probs.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (e, q) in eigs.iter().zip(&probs) {
                    assert!((e - q).abs() < 1e-12, "{fam:?} p={p}");
                }
            }
        }
    }

    #[test]
    fn identity_choi_is_maximally_entangled_projector() {
        let j = PauliChannel::identity().choi();
        // rank-1, trace 1, J² = J
        let j2 = j.matmul(&j);
        assert!(j2.max_abs_diff(&j) < 1e-14);
        assert!((j.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kraus_completeness_and_counts() {
        let ch = ChannelFamily::Depolarizing.channel(0.1).unwrap();
        let kraus = ch.kraus_operators();
        assert_eq!(kraus.len(), 4);
        let weights: Vec<f64> = kraus.iter().map(|(w, _)| *w).collect();
        assert_eq!(weights, vec![0.7, 0.1, 0.1, 0.1]);
        let mut sum = Mat2::zero();
        for (_, a) in &kraus {
            sum = sum.add(&a.dagger().matmul(a));
        }
        assert!((sum.0[0][0].re - 1.0).abs() < 1e-12 && (sum.0[1][1].re - 1.0).abs() < 1e-12);
        assert!(sum.0[0][1].norm() < 1e-12);

        assert_eq!(PauliChannel::identity().kraus_operators().len(), 1);
        assert_eq!(ChannelFamily::TwoPauli.channel(0.2).unwrap().kraus_operators().len(), 3);
    }

    #[test]
    fn hashing_values() {
        assert!((PauliChannel::identity().hashing_ci() - 1.0).abs() < 1e-15);
        let ch = ChannelFamily::Depolarizing.channel(0.25).unwrap();
        assert!((ch.hashing_ci() + 1.0).abs() < 1e-12);
        // sign change brackets the random-coding threshold
        let lo = ChannelFamily::Depolarizing.channel(0.0630).unwrap().hashing_ci();
        let hi = ChannelFamily::Depolarizing.channel(0.0632).unwrap().hashing_ci();
        assert!(lo > 0.0 && hi < 0.0);
    }

    #[test]
    fn family_parameter_validation() {
        assert!(ChannelFamily::Depolarizing.channel(0.5).is_err());
        assert!(ChannelFamily::TwoPauli.channel(0.6).is_err());
        assert!(ChannelFamily::IndependentXz.channel(-0.1).is_err());
        assert!(ChannelFamily::parse("dep").is_ok());
        assert!(ChannelFamily::parse("nope").is_err());
    }

    #[test]
    fn two_pauli_choi_has_a_zero_eigenvalue() {
        let ch = ChannelFamily::TwoPauli.channel(0.17).unwrap();
        let eigs = hermitian_eigenvalues(&ch.choi()).unwrap();
        assert!(eigs[0].abs() < 1e-14);
    }
}
