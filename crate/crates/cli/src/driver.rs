//! Parallel orchestration on top of the pure core: precomputation fans out
//! per partition, optimizer restarts fan out per index, and both merge
//! deterministically so that results are bit-identical to the sequential
//! path regardless of worker count.

use std::sync::OnceLock;

use rayon::prelude::*;

use symcap_core::basis::SpanningBasis;
use symcap_core::channel::PauliChannel;
use symcap_core::ci::{evaluate_ci, lambda_data, CiResult, Precomputation, SymmetricInput};
use symcap_core::optimizer::{
    merge_outcomes, run_restart, MaximizeResult, OptimizerConfig, OptimizerResult, RestartOutcome,
};
use symcap_core::oracle::brute_ci;
use symcap_core::rep::enumerate_partitions;
use symcap_core::C64;

/// Configure the global worker pool from `SYMCAP_THREADS` once per process.
pub fn init_threads() {
    static INIT: OnceLock<()> = OnceLock::new();
    INIT.get_or_init(|| {
        if let Ok(v) = std::env::var("SYMCAP_THREADS") {
            if let Ok(threads) = v.trim().parse::<usize>() {
                if threads >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
                }
            }
        }
    });
}

/// Per-partition blocks computed in parallel and reassembled in enumeration
/// order.
pub fn precompute_parallel(
    channel: &PauliChannel,
    n: usize,
    basis: &SpanningBasis,
) -> CiResult<Precomputation> {
    let lambdas = enumerate_partitions(n, 2)?;
    let parts = lambdas
        .par_iter()
        .map(|lam| lambda_data(channel, n, basis, lam))
        .collect::<CiResult<Vec<_>>>()?;
    Ok(Precomputation::from_parts(*channel, n, basis.clone(), parts))
}

/// Restarts in parallel, merged exactly like the sequential maximizer.
pub fn maximize_parallel(
    pre: &Precomputation,
    cfg: &OptimizerConfig,
    warm: Option<&SymmetricInput>,
) -> OptimizerResult<MaximizeResult> {
    cfg.validate()?;
    let outcomes = (0..cfg.restarts)
        .into_par_iter()
        .map(|idx| run_restart(pre, cfg, idx, warm))
        .collect::<OptimizerResult<Vec<RestartOutcome>>>()?;
    Ok(merge_outcomes(&outcomes))
}

/// One oracle-vs-fast-path comparison batch.
#[derive(Clone, Debug)]
pub struct OracleCheckReport {
    pub cases: usize,
    pub max_diff: f64,
    pub worst_case: String,
    pub failures: usize,
}

/// Tolerance for the fast-path-vs-oracle equivalence suite.
pub const ORACLE_TOL: f64 = 1e-8;

/// Run the equivalence suite for one `(channel, n)` with `cases` random
/// inputs. `fast` is injectable so the suite's own sensitivity can be tested
/// against a corrupted evaluator.
pub fn oracle_check_batch<F>(
    channel: &PauliChannel,
    pre: &Precomputation,
    n: usize,
    cases: usize,
    seed: u64,
    fast: F,
) -> OracleCheckReport
where
    F: Fn(&SymmetricInput, &Precomputation) -> CiResult<f64> + Sync,
{
    let results: Vec<(f64, usize)> = (0..cases)
        .into_par_iter()
        .map(|case| {
            let input = random_input(n, seed, case as u64);
            let f = fast(&input, pre).expect("fast path evaluation");
            let b = brute_ci(&input, channel).expect("oracle evaluation");
            ((f - b).abs(), case)
        })
        .collect();
    let mut max_diff = 0.0f64;
    let mut worst = 0usize;
    let mut failures = 0usize;
    for (d, case) in &results {
        if *d > max_diff {
            max_diff = *d;
            worst = *case;
        }
        if *d > ORACLE_TOL {
            failures += 1;
        }
    }
    OracleCheckReport {
        cases,
        max_diff,
        worst_case: format!("case {worst}"),
        failures,
    }
}

/// The default fast path used by the suite.
pub fn fast_path(input: &SymmetricInput, pre: &Precomputation) -> CiResult<f64> {
    evaluate_ci(input, pre)
}

/// Deterministic random input for suite case `(seed, case)`.
pub fn random_input(n: usize, seed: u64, case: u64) -> SymmetricInput {
    // splitmix-style expansion keeps cases decorrelated without rand deps
    let mut state = seed ^ case.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0x0dd5_ca5e;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let mut uniform = move || (next() >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0;
    let mut row = || -> Vec<C64> { (0..=n).map(|_| C64::new(uniform(), uniform())).collect() };
    let a0 = row();
    let a1 = row();
    SymmetricInput::normalized(a0, a1).expect("random rows are nonzero")
}
