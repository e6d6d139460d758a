//! Maximize the coherent information over rank-two symmetric-subspace inputs
//! for a fixed `(channel, n, p)`, and locate the threshold `p*` where the
//! maximum crosses the positivity criterion.
//!
//! The optimizer is a multi-start projected gradient ascent over the `4(n+1)`
//! real components of the coefficient rows, with rows renormalized after
//! every step and an adaptive step size that backtracks on decrease. The
//! landscape is highly non-convex, so restarts mix random Gaussian rows,
//! repetition-code-like tensor-power pairs, and Dicke-sparse seeds.
//! Everything is deterministic given the configuration seed.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::{Float, Zero};
use thiserror::Error;

use crate::basis::{choose_spanning_states, BasisError};
use crate::channel::ChannelFamily;
use crate::ci::{ci_and_gradient, evaluate_ci, precompute, CiError, Precomputation, SymmetricInput};
use crate::rep::binomial;
use crate::rng::Rng;

/// Positivity criterion: a point is feasible when the total coherent
/// information reaches this value, and reported thresholds are the largest
/// `p` certified feasible.
pub const EPS_POS: f64 = 1e-7;

/// Bisection terminates when the bracket width falls below this.
pub const BISECTION_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizerError {
    #[error("invalid configuration: {0}")]
    Config(&'static str),

    #[error("bracket precondition violated: CI at p={0} is {1:.3e}")]
    Bracket(f64, f64),

    #[error(transparent)]
    Ci(#[from] CiError),

    #[error(transparent)]
    Basis(#[from] BasisError),
}

pub type OptimizerResult<T> = Result<T, OptimizerError>;

/// How the ascent direction is obtained.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GradientMode {
    /// Central finite differences of the renormalized objective,
    /// component by component.
    FiniteDifference,
    /// Exact gradient of the block entropies through the eigensystems;
    /// identical objective, two orders of magnitude cheaper per step at
    /// large `n`.
    Analytic,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Finite-difference displacement `h`.
    pub gradient_step: f64,
    pub initial_step: f64,
    pub step_grow: f64,
    pub step_shrink: f64,
    pub min_step: f64,
    /// Convergence tolerance on the objective.
    pub ci_tolerance: f64,
    /// Accepted steps below tolerance before declaring convergence.
    pub patience: usize,
    pub seed: u64,
    pub gradient_mode: GradientMode,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 20,
            max_iterations: 2000,
            gradient_step: 1e-6,
            initial_step: 0.1,
            step_grow: 1.3,
            step_shrink: 0.5,
            min_step: 1e-12,
            ci_tolerance: 1e-12,
            patience: 30,
            seed: 0,
            gradient_mode: GradientMode::FiniteDifference,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> OptimizerResult<()> {
        if self.restarts < 1 {
            return Err(OptimizerError::Config("restarts must be at least 1"));
        }
        if self.ci_tolerance <= 0.0 || self.min_step <= 0.0 || self.gradient_step <= 0.0 {
            return Err(OptimizerError::Config("tolerances must be positive"));
        }
        if !(self.step_shrink > 0.0 && self.step_shrink < 1.0 && self.step_grow >= 1.0) {
            return Err(OptimizerError::Config("step schedule must shrink/grow"));
        }
        Ok(())
    }

    /// Component-count-aware default: finite differences cost `8(n+1)`
    /// evaluations per step, so larger problems switch to the analytic
    /// gradient of the same objective.
    pub fn for_n(n: usize) -> Self {
        let mut cfg = OptimizerConfig::default();
        if n > 10 {
            cfg.gradient_mode = GradientMode::Analytic;
        }
        cfg
    }
}

/// Result of one restart.
#[derive(Clone, Debug)]
pub struct RestartOutcome {
    pub restart_index: usize,
    pub input: SymmetricInput,
    pub ci: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Best outcome over all restarts.
#[derive(Clone, Debug)]
pub struct MaximizeResult {
    pub input: SymmetricInput,
    pub ci: f64,
    pub converged: bool,
}

/// Persisted threshold-search result. `wall_time_s` is filled by the caller
/// that has a clock; the search itself is pure.
#[derive(Clone, Debug)]
pub struct ThresholdRecord {
    pub family: ChannelFamily,
    pub n: usize,
    pub p_star: f64,
    pub ci_at_bracket: (f64, f64),
    pub best_input: SymmetricInput,
    pub seed: u64,
    pub wall_time_s: f64,
}

/// Deterministic initial point for a restart. Index 0 is the warm start when
/// one is supplied; low indices are the structured seeds that recover
/// repetition-like codes quickly; the rest mix random rows, rotated
/// tensor-power pairs, and sparse Dicke pairs.
pub fn initial_input(
    n: usize,
    seed: u64,
    restart_index: usize,
    warm: Option<&SymmetricInput>,
) -> SymmetricInput {
    if restart_index == 0 {
        if let Some(w) = warm {
            return w.clone();
        }
    }
    match restart_index {
        0 | 1 => plus_minus_pair(n),
        2 => dicke_pair(n, 0, n),
        _ => {
            let mut rng = Rng::seed_from(seed, 0x5eed_0000 + restart_index as u64);
            match (restart_index - 3) % 3 {
                0 => gaussian_input(n, &mut rng),
                1 => rotated_tensor_pair(n, &mut rng),
                _ => noisy_dicke_pair(n, &mut rng),
            }
        }
    }
}

/// `(|+⟩^{⊗n}, |−⟩^{⊗n})` in Dicke coordinates.
pub fn plus_minus_pair(n: usize) -> SymmetricInput {
    let scale = 2.0f64.powi(-(n as i32)).sqrt();
    let a0: Vec<C64> = (0..=n).map(|k| C64::new(binomial(n, k).sqrt() * scale, 0.0)).collect();
    let a1: Vec<C64> =
        a0.iter().enumerate().map(|(k, z)| if k % 2 == 0 { *z } else { -*z }).collect();
    SymmetricInput::normalized(a0, a1).expect("tensor pair rows are unit")
}

fn dicke_pair(n: usize, k0: usize, k1: usize) -> SymmetricInput {
    let mut a0 = vec![C64::zero(); n + 1];
    let mut a1 = vec![C64::zero(); n + 1];
    a0[k0] = C64::new(1.0, 0.0);
    a1[k1] = C64::new(1.0, 0.0);
    SymmetricInput::new(a0, a1).expect("unit rows")
}

fn gaussian_input(n: usize, rng: &mut Rng) -> SymmetricInput {
    let row = |rng: &mut Rng| -> Vec<C64> {
        (0..=n).map(|_| C64::new(rng.normal(), rng.normal())).collect()
    };
    let a0 = row(rng);
    let a1 = row(rng);
    SymmetricInput::normalized(a0, a1).expect("gaussian rows are nonzero")
}

/// A random single-qubit state and its antipode, as tensor powers.
fn rotated_tensor_pair(n: usize, rng: &mut Rng) -> SymmetricInput {
    let theta = (1.0 - 2.0 * rng.uniform()).acos();
    let phi = rng.uniform_in(0.0, core::f64::consts::TAU);
    let (c0, c1) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = C64::new(0.0, phi).exp();
    let a0: Vec<C64> = (0..=n)
        .map(|k| {
            binomial(n, k).sqrt() * C64::new(c0, 0.0).powi((n - k) as i32) * (e * c1).powi(k as i32)
        })
        .collect();
    // antipodal state: (sin(θ/2), −e^{iφ} cos(θ/2))
    let a1: Vec<C64> = (0..=n)
        .map(|k| {
            binomial(n, k).sqrt()
                * C64::new(c1, 0.0).powi((n - k) as i32)
                * (-e * c0).powi(k as i32)
        })
        .collect();
    SymmetricInput::normalized(a0, a1).expect("tensor rows are unit")
}

fn noisy_dicke_pair(n: usize, rng: &mut Rng) -> SymmetricInput {
    let k0 = rng.index(n + 1);
    let mut k1 = rng.index(n + 1);
    if k1 == k0 {
        k1 = (k0 + 1) % (n + 1);
    }
    let noise = 0.05;
    let mut a0 = vec![C64::zero(); n + 1];
    let mut a1 = vec![C64::zero(); n + 1];
    for k in 0..=n {
        a0[k] = C64::new(noise * rng.normal(), noise * rng.normal());
        a1[k] = C64::new(noise * rng.normal(), noise * rng.normal());
    }
    a0[k0] += C64::new(1.0, 0.0);
    a1[k1] += C64::new(1.0, 0.0);
    SymmetricInput::normalized(a0, a1).expect("sparse rows are nonzero")
}

/// Projected gradient ascent from one starting point. Pure and deterministic;
/// restarts may run concurrently and are merged by [`merge_outcomes`].
pub fn run_restart(
    pre: &Precomputation,
    cfg: &OptimizerConfig,
    restart_index: usize,
    warm: Option<&SymmetricInput>,
) -> OptimizerResult<RestartOutcome> {
    cfg.validate()?;
    let n = pre.n();
    let mut x = initial_input(n, cfg.seed, restart_index, warm);
    let mut f = evaluate_ci(&x, pre)?;
    let mut step = cfg.initial_step;
    let mut no_improve = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;

    for iter in 0..cfg.max_iterations {
        iterations = iter + 1;
        let grad = gradient(&x, pre, cfg)?;
        let gnorm =
            grad.iter().flat_map(|row| row.iter()).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if gnorm < 1e-13 {
            converged = true;
            break;
        }
        // backtracking line search on the renormalized objective
        let mut accepted = false;
        while step >= cfg.min_step {
            let cand = step_input(&x, &grad, step);
            let fc = evaluate_ci(&cand, pre)?;
            if fc > f {
                let gain = fc - f;
                x = cand;
                f = fc;
                step = (step * cfg.step_grow).min(1.0);
                accepted = true;
                if gain < cfg.ci_tolerance {
                    no_improve += 1;
                } else {
                    no_improve = 0;
                }
                break;
            }
            step *= cfg.step_shrink;
        }
        if !accepted || no_improve >= cfg.patience {
            converged = true;
            break;
        }
    }

    Ok(RestartOutcome { restart_index, input: x, ci: f, converged, iterations })
}

fn gradient(
    x: &SymmetricInput,
    pre: &Precomputation,
    cfg: &OptimizerConfig,
) -> OptimizerResult<[Vec<C64>; 2]> {
    match cfg.gradient_mode {
        GradientMode::Analytic => Ok(ci_and_gradient(x, pre)?.1),
        GradientMode::FiniteDifference => finite_difference_gradient(x, pre, cfg.gradient_step),
    }
}

/// Central finite differences of the renormalized objective over all
/// `4(n+1)` real components.
pub fn finite_difference_gradient(
    x: &SymmetricInput,
    pre: &Precomputation,
    h: f64,
) -> OptimizerResult<[Vec<C64>; 2]> {
    let n = x.n();
    let mut grad = [vec![C64::zero(); n + 1], vec![C64::zero(); n + 1]];
    for i in 0..2 {
        for k in 0..=n {
            for part in 0..2 {
                let probe = |sign: f64| -> OptimizerResult<f64> {
                    let mut rows = [x.row(0).to_vec(), x.row(1).to_vec()];
                    let delta =
                        if part == 0 { C64::new(sign * h, 0.0) } else { C64::new(0.0, sign * h) };
                    rows[i][k] += delta;
                    let [a0, a1] = rows;
                    let p = SymmetricInput::normalized(a0, a1)?;
                    Ok(evaluate_ci(&p, pre)?)
                };
                let d = (probe(1.0)? - probe(-1.0)?) / (2.0 * h);
                if part == 0 {
                    grad[i][k] += C64::new(d, 0.0);
                } else {
                    grad[i][k] += C64::new(0.0, d);
                }
            }
        }
    }
    Ok(grad)
}

fn step_input(x: &SymmetricInput, grad: &[Vec<C64>; 2], step: f64) -> SymmetricInput {
    let n = x.n();
    let mut rows = [x.row(0).to_vec(), x.row(1).to_vec()];
    for i in 0..2 {
        for k in 0..=n {
            rows[i][k] += step * grad[i][k];
        }
    }
    let [a0, a1] = rows;
    SymmetricInput::normalized(a0, a1).expect("stepped rows stay nonzero")
}

/// Deterministic merge: the best coherent information, ties resolved by the
/// lower restart index.
pub fn merge_outcomes(outcomes: &[RestartOutcome]) -> MaximizeResult {
    let best = outcomes
        .iter()
        .min_by(|a, b| {
            b.ci.partial_cmp(&a.ci).unwrap().then(a.restart_index.cmp(&b.restart_index))
        })
        .expect("at least one restart");
    MaximizeResult { input: best.input.clone(), ci: best.ci, converged: best.converged }
}

/// Best input over all restarts, sequentially. Parallel drivers fan
/// [`run_restart`] out per index and feed [`merge_outcomes`] the same list.
pub fn maximize_ci(
    pre: &Precomputation,
    cfg: &OptimizerConfig,
    warm: Option<&SymmetricInput>,
) -> OptimizerResult<MaximizeResult> {
    cfg.validate()?;
    let mut outcomes = Vec::with_capacity(cfg.restarts);
    for idx in 0..cfg.restarts {
        outcomes.push(run_restart(pre, cfg, idx, warm)?);
    }
    Ok(merge_outcomes(&outcomes))
}

/// Bisection for the largest `p` in the bracket whose maximized coherent
/// information stays at or above [`EPS_POS`], warm-starting each inner
/// maximization from the previous evaluation's optimum. The reported `p_star`
/// is a certified feasible point, so optimizer shortfalls only make it
/// conservative.
///
/// `maximize` abstracts the inner solve so drivers can cache precomputations
/// and parallelize restarts; see [`threshold_search`] for the self-contained
/// variant.
pub fn threshold_search_with<F>(
    family: ChannelFamily,
    n: usize,
    cfg: &OptimizerConfig,
    bracket: (f64, f64),
    mut maximize: F,
) -> OptimizerResult<ThresholdRecord>
where
    F: FnMut(f64, Option<&SymmetricInput>) -> OptimizerResult<MaximizeResult>,
{
    cfg.validate()?;
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(OptimizerError::Config("bracket must satisfy p_lo < p_hi"));
    }
    let at_lo = maximize(lo, None)?;
    if at_lo.ci < EPS_POS {
        return Err(OptimizerError::Bracket(lo, at_lo.ci));
    }
    let mut warm = at_lo.input.clone();
    let mut best_at_lo = at_lo.input;
    let mut ci_lo = at_lo.ci;
    let at_hi = maximize(hi, Some(&warm))?;
    if at_hi.ci >= EPS_POS {
        return Err(OptimizerError::Bracket(hi, at_hi.ci));
    }
    let mut ci_hi = at_hi.ci;
    warm = at_hi.input;

    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let res = maximize(mid, Some(&warm))?;
        warm = res.input.clone();
        if res.ci >= EPS_POS {
            lo = mid;
            ci_lo = res.ci;
            best_at_lo = res.input;
        } else {
            hi = mid;
            ci_hi = res.ci;
        }
    }

    Ok(ThresholdRecord {
        family,
        n,
        p_star: lo,
        ci_at_bracket: (ci_lo, ci_hi),
        best_input: best_at_lo,
        seed: cfg.seed,
        wall_time_s: 0.0,
    })
}

/// Self-contained threshold search: one spanning basis per `(n, seed)`, one
/// precomputation per probed `p`, restarts in sequence.
pub fn threshold_search(
    family: ChannelFamily,
    n: usize,
    cfg: &OptimizerConfig,
    bracket: (f64, f64),
) -> OptimizerResult<ThresholdRecord> {
    let basis = choose_spanning_states(n, cfg.seed)?;
    threshold_search_with(family, n, cfg, bracket, |p, warm| {
        let ch = family.channel(p).map_err(|_| OptimizerError::Config("p outside family range"))?;
        let pre = precompute(&ch, n, &basis)?;
        maximize_ci(&pre, cfg, warm)
    })
}
