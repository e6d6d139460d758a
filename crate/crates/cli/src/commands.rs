//! Subcommand implementations. Each returns `Ok(())` or a [`CmdError`] whose
//! variant fixes the process exit code: usage/schema problems exit 2,
//! numeric/bracket failures exit 1.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use symcap_core::basis::choose_spanning_states;
use symcap_core::channel::{ChannelFamily, PauliChannel};
use symcap_core::ci::{
    block_decomposition, entropy_bits, evaluate_ci, evaluate_ci_compensated, SymmetricInput,
};
use symcap_core::degen;
use symcap_core::optimizer::{
    threshold_search_with, GradientMode, OptimizerConfig, OptimizerError, EPS_POS,
};

use crate::driver;
use crate::schema::{self, ChannelSpec, FamilyTag, Meta, SchemaError};
use crate::{EXIT_NUMERIC, EXIT_USAGE};

#[derive(Debug, Error)]
pub enum CmdError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Numeric(String),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CmdError::Usage(_) => EXIT_USAGE,
            CmdError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<SchemaError> for CmdError {
    fn from(e: SchemaError) -> Self {
        CmdError::Usage(e.to_string())
    }
}

impl From<symcap_core::ci::CiError> for CmdError {
    fn from(e: symcap_core::ci::CiError) -> Self {
        CmdError::Numeric(e.to_string())
    }
}

impl From<OptimizerError> for CmdError {
    fn from(e: OptimizerError) -> Self {
        match e {
            OptimizerError::Config(_) => CmdError::Usage(e.to_string()),
            other => CmdError::Numeric(other.to_string()),
        }
    }
}

impl From<symcap_core::basis::BasisError> for CmdError {
    fn from(e: symcap_core::basis::BasisError) -> Self {
        match e {
            symcap_core::basis::BasisError::DomainN(_)
            | symcap_core::basis::BasisError::TooLarge(_) => CmdError::Usage(e.to_string()),
            other => CmdError::Numeric(other.to_string()),
        }
    }
}

impl From<degen::DegenError> for CmdError {
    fn from(e: degen::DegenError) -> Self {
        CmdError::Numeric(e.to_string())
    }
}

pub type CmdResult = Result<(), CmdError>;

#[derive(Parser, Debug)]
#[command(
    name = "symcap",
    version,
    about = "Coherent information of mixed Pauli channels on the symmetric subspace: evaluation, threshold search, degeneracy diagnostics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and persist the spanning basis for a (channel, p, n) key
    Precompute(PrecomputeArgs),
    /// Evaluate the coherent information of a persisted input state
    Ci(CiArgs),
    /// Maximize coherent information at fixed (channel, p, n)
    Optimize(OptimizeArgs),
    /// Bisection search for the capacity threshold at one n
    Threshold(ThresholdArgs),
    /// Threshold search over a range of n, emitting figure-ready CSV
    Sweep(SweepArgs),
    /// Partition distribution, two-row mass, annihilation and typicality stats
    DegeneracyReport(DegeneracyArgs),
    /// Fast-path vs dense-oracle equivalence suite
    OracleCheck(OracleCheckArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum FamilyArg {
    Dep,
    Xz,
    #[value(name = "2pauli")]
    TwoPauli,
}

impl From<FamilyArg> for ChannelFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Dep => ChannelFamily::Depolarizing,
            FamilyArg::Xz => ChannelFamily::IndependentXz,
            FamilyArg::TwoPauli => ChannelFamily::TwoPauli,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
pub enum PrecisionArg {
    Double,
    Extended,
}

#[derive(Args, Debug)]
pub struct PrecomputeArgs {
    #[arg(long, value_enum)]
    pub channel: FamilyArg,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Basis cache file to create or reuse
    #[arg(long, default_value = "symcap-cache.json")]
    pub cache: PathBuf,
}

#[derive(Args, Debug)]
pub struct CiArgs {
    #[arg(long, value_enum)]
    pub channel: FamilyArg,
    #[arg(long)]
    pub p: f64,
    /// Input state file ({n, alpha0, alpha1})
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reuse a basis cache written by `precompute`
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "double")]
    pub precision: PrecisionArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub channel: FamilyArg,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    /// Warm-start state file
    #[arg(long)]
    pub warm: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub grad: Option<GradArg>,
    #[arg(long, default_value = "symcap-best.json")]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
pub enum GradArg {
    Fd,
    Analytic,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    #[arg(long, value_enum)]
    pub channel: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p_lo: Option<f64>,
    #[arg(long)]
    pub p_hi: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, value_enum)]
    pub grad: Option<GradArg>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Warm-start state file applied at the first bracket evaluation
    #[arg(long)]
    pub warm: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub channel: FamilyArg,
    /// Inclusive block-length range, e.g. 1..5
    #[arg(long, value_parser = parse_range)]
    pub n_range: (usize, usize),
    #[arg(long)]
    pub p_lo: Option<f64>,
    #[arg(long)]
    pub p_hi: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, value_enum)]
    pub grad: Option<GradArg>,
    #[arg(long, default_value = "symcap-sweep.csv")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct DegeneracyArgs {
    #[arg(long, value_enum)]
    pub channel: FamilyArg,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "symcap-degeneracy.json")]
    pub out: PathBuf,
    /// CSV of P(λ) rows; defaults to the JSON path with a .csv extension
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OracleCheckArgs {
    /// Largest block length to test (the dense suite is capped at 8)
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: usize = a.trim().parse().map_err(|_| "bad lower bound")?;
    let hi: usize = b.trim().parse().map_err(|_| "bad upper bound")?;
    if lo == 0 || hi < lo {
        return Err("need 1 <= LO <= HI".to_string());
    }
    Ok((lo, hi))
}

/// Seed defaulted from entropy when absent, then recorded in outputs.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        nanos ^ (std::process::id() as u64) << 32
    })
}

fn family_channel(family: ChannelFamily, p: f64) -> Result<PauliChannel, CmdError> {
    family.channel(p).map_err(|e| CmdError::Usage(e.to_string()))
}

fn default_bracket(family: ChannelFamily) -> (f64, f64) {
    match family {
        ChannelFamily::Depolarizing => (0.05, 0.08),
        ChannelFamily::IndependentXz => (0.09, 0.14),
        ChannelFamily::TwoPauli => (0.09, 0.14),
    }
}

fn optimizer_config(
    n: usize,
    seed: u64,
    restarts: Option<usize>,
    iters: Option<usize>,
    grad: Option<GradArg>,
) -> OptimizerConfig {
    let mut cfg = OptimizerConfig::for_n(n);
    cfg.seed = seed;
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    if let Some(i) = iters {
        cfg.max_iterations = i;
    }
    if let Some(g) = grad {
        cfg.gradient_mode = match g {
            GradArg::Fd => GradientMode::FiniteDifference,
            GradArg::Analytic => GradientMode::Analytic,
        };
    }
    cfg
}

fn load_or_build_basis(
    spec: ChannelSpec,
    n: usize,
    seed: u64,
    cache: Option<&Path>,
) -> Result<symcap_core::basis::SpanningBasis, CmdError> {
    if let Some(path) = cache {
        if path.exists() {
            let file: schema::BasisCacheFile = schema::read_json(path)?;
            if file.channel == spec && file.n == n {
                eprintln!("cache hit: reusing basis from {}", path.display());
                return Ok(file.to_basis(&path.display().to_string())?);
            }
            eprintln!("cache key mismatch at {}; rebuilding basis", path.display());
        }
    }
    Ok(choose_spanning_states(n, seed)?)
}

// ---------------------------------------------------------------------------
// precompute
// ---------------------------------------------------------------------------

pub fn cmd_precompute(args: &PrecomputeArgs) -> CmdResult {
    let family: ChannelFamily = args.channel.into();
    let channel = family_channel(family, args.p)?;
    let seed = resolve_seed(args.seed);
    let spec = ChannelSpec { kind: family.into(), p: args.p };
    let hash = schema::config_hash(&format!(
        "precompute {} p={} n={} seed={seed}",
        family.name(),
        args.p,
        args.n
    ));

    if args.cache.exists() {
        let existing: schema::BasisCacheFile = schema::read_json(&args.cache)?;
        if existing.channel == spec && existing.n == args.n && existing.seed == seed {
            eprintln!("cache hit: {} already covers this key, skipping", args.cache.display());
            return Ok(());
        }
    }

    let t0 = Instant::now();
    let basis = choose_spanning_states(args.n, seed)?;
    // build the blocks once so the persisted basis is known-good
    let pre = driver::precompute_parallel(&channel, args.n, &basis)?;
    let file = schema::BasisCacheFile::from_basis(&basis, spec, Some(Meta::new(seed, &hash)));
    schema::write_json_atomic(&args.cache, &file)?;
    println!(
        "precomputed {} blocks for {} p={} n={} (cond {:.3e}) in {:.2}s -> {}",
        pre.lambdas().len(),
        family.name(),
        args.p,
        args.n,
        basis.condition_number(),
        t0.elapsed().as_secs_f64(),
        args.cache.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// ci
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct CiOutput {
    meta: Meta,
    channel: ChannelSpec,
    n: usize,
    total_ci: f64,
    rate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    compensated_ci: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    compensation_gap: Option<f64>,
    blocks: Vec<BlockRow>,
}

#[derive(serde::Serialize)]
struct BlockRow {
    lambda: Vec<u16>,
    c: f64,
    s_sigma: f64,
    s_omega: f64,
}

pub fn cmd_ci(args: &CiArgs) -> CmdResult {
    let family: ChannelFamily = args.channel.into();
    let channel = family_channel(family, args.p)?;
    let state: schema::StateFile = schema::read_json(&args.state)?;
    let input = state.to_input(&args.state.display().to_string())?;
    let n = input.n();
    let seed = resolve_seed(args.seed);
    let spec = ChannelSpec { kind: family.into(), p: args.p };
    let hash = schema::config_hash(&format!(
        "ci {} p={} n={n} seed={seed} precision={:?}",
        family.name(),
        args.p,
        args.precision
    ));

    let basis = load_or_build_basis(spec, n, seed, args.cache.as_deref())?;
    let pre = driver::precompute_parallel(&channel, n, &basis)?;
    let dec = block_decomposition(&input, &pre)?;

    let mut total = 0.0;
    let mut rows = Vec::new();
    for b in &dec.blocks {
        let s_sigma = entropy_bits(&b.sigma)?;
        let s_omega = entropy_bits(&b.omega)?;
        total += b.c * (s_sigma - s_omega);
        rows.push(BlockRow { lambda: b.lambda.parts().to_vec(), c: b.c, s_sigma, s_omega });
    }

    println!("total coherent information: {total:.12}");
    println!("rate per channel use:       {:.12}", total / n as f64);
    println!("{:>12} {:>18} {:>18} {:>18}", "lambda", "c_lambda", "S(sigma)", "S(omega)");
    for r in &rows {
        println!(
            "{:>12} {:>18.12} {:>18.12} {:>18.12}",
            format!("{:?}", r.lambda),
            r.c,
            r.s_sigma,
            r.s_omega
        );
    }

    let (compensated_ci, compensation_gap) = if args.precision == PrecisionArg::Extended {
        let comp = evaluate_ci_compensated(&input, &pre)?;
        println!("compensated re-evaluation:  {comp:.12} (gap {:.3e})", (comp - total).abs());
        (Some(comp), Some((comp - total).abs()))
    } else {
        (None, None)
    };

    if let Some(out) = &args.out {
        let payload = CiOutput {
            meta: Meta::new(seed, &hash),
            channel: spec,
            n,
            total_ci: total,
            rate: total / n as f64,
            compensated_ci,
            compensation_gap,
            blocks: rows,
        };
        schema::write_json_atomic(out, &payload)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

pub fn cmd_optimize(args: &OptimizeArgs) -> CmdResult {
    let family: ChannelFamily = args.channel.into();
    let channel = family_channel(family, args.p)?;
    let seed = resolve_seed(args.seed);
    let cfg = optimizer_config(args.n, seed, args.restarts, args.iters, args.grad);
    let hash = schema::config_hash(&format!(
        "optimize {} p={} n={} seed={seed} restarts={} iters={} grad={:?}",
        family.name(),
        args.p,
        args.n,
        cfg.restarts,
        cfg.max_iterations,
        cfg.gradient_mode
    ));

    let warm = match &args.warm {
        Some(path) => {
            let f: schema::StateFile = schema::read_json(path)?;
            Some(f.to_input(&path.display().to_string())?)
        }
        None => None,
    };

    let t0 = Instant::now();
    let basis = choose_spanning_states(args.n, seed)?;
    let pre = driver::precompute_parallel(&channel, args.n, &basis)?;
    let res = driver::maximize_parallel(&pre, &cfg, warm.as_ref())?;
    let dt = t0.elapsed().as_secs_f64();

    println!(
        "best CI {:.12} (rate {:.12}) converged={} in {dt:.2}s",
        res.ci,
        res.ci / args.n as f64,
        res.converged
    );
    let file = schema::StateFile::from_input(&res.input, Some(Meta::new(seed, &hash)), Some(res.ci));
    schema::write_json_atomic(&args.out, &file)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// threshold and sweep
// ---------------------------------------------------------------------------

fn run_threshold(
    family: ChannelFamily,
    n: usize,
    cfg: &OptimizerConfig,
    bracket: (f64, f64),
    warm: Option<SymmetricInput>,
) -> Result<symcap_core::optimizer::ThresholdRecord, CmdError> {
    let basis = choose_spanning_states(n, cfg.seed)?;
    let mut first = true;
    let t0 = Instant::now();
    let mut record = threshold_search_with(family, n, cfg, bracket, |p, warm_inner| {
        let channel =
            family.channel(p).map_err(|_| OptimizerError::Config("p outside family range"))?;
        let pre = driver::precompute_parallel(&channel, n, &basis)?;
        let w = if first { warm.as_ref().or(warm_inner) } else { warm_inner };
        first = false;
        driver::maximize_parallel(&pre, cfg, w)
    })?;
    record.wall_time_s = t0.elapsed().as_secs_f64();
    Ok(record)
}

pub fn cmd_threshold(args: &ThresholdArgs) -> CmdResult {
    let family: ChannelFamily = args.channel.into();
    let seed = resolve_seed(args.seed);
    let cfg = optimizer_config(args.n, seed, args.restarts, args.iters, args.grad);
    let bracket = (
        args.p_lo.unwrap_or(default_bracket(family).0),
        args.p_hi.unwrap_or(default_bracket(family).1),
    );
    let hash = schema::config_hash(&format!(
        "threshold {} n={} bracket={bracket:?} seed={seed} restarts={} iters={} grad={:?}",
        family.name(),
        args.n,
        cfg.restarts,
        cfg.max_iterations,
        cfg.gradient_mode
    ));
    let warm = match &args.warm {
        Some(path) => {
            let f: schema::StateFile = schema::read_json(path)?;
            Some(f.to_input(&path.display().to_string())?)
        }
        None => None,
    };

    let record = run_threshold(family, args.n, &cfg, bracket, warm)?;
    println!(
        "p* = {:.6} for {} at n={} (CI bracket [{:.3e}, {:.3e}], {:.1}s)",
        record.p_star,
        family.name(),
        args.n,
        record.ci_at_bracket.0,
        record.ci_at_bracket.1,
        record.wall_time_s
    );
    if let Some(out) = &args.out {
        let file = schema::ThresholdFile::from_record(&record, Some(Meta::new(seed, &hash)));
        schema::write_json_atomic(out, &file)?;
    }
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs) -> CmdResult {
    let family: ChannelFamily = args.channel.into();
    let seed = resolve_seed(args.seed);
    let (n_lo, n_hi) = args.n_range;
    let bracket_defaults = default_bracket(family);
    let bracket =
        (args.p_lo.unwrap_or(bracket_defaults.0), args.p_hi.unwrap_or(bracket_defaults.1));
    let hash = schema::config_hash(&format!(
        "sweep {} n={n_lo}..{n_hi} bracket={bracket:?} seed={seed} restarts={:?} iters={:?} grad={:?}",
        family.name(),
        args.restarts,
        args.iters,
        args.grad.map(|g| format!("{g:?}"))
    ));

    // resumability: an existing file must carry the same config hash
    let mut lines: Vec<String> = Vec::new();
    let mut done: Vec<usize> = Vec::new();
    if args.out.exists() {
        let text = std::fs::read_to_string(&args.out)
            .map_err(|e| CmdError::Usage(format!("{}: {e}", args.out.display())))?;
        for line in text.lines() {
            if line.starts_with('#') {
                if !line.contains(&format!("config={hash}")) {
                    return Err(CmdError::Usage(format!(
                        "{} was produced with a different config; refusing to mix rows",
                        args.out.display()
                    )));
                }
                continue;
            }
            if line.starts_with("family,") || line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() >= 7 && cols[0] == family.name() && cols[5] == seed.to_string() {
                if let Ok(n) = cols[1].parse::<usize>() {
                    done.push(n);
                }
            }
            lines.push(line.to_string());
        }
    }

    let mut failures = 0usize;
    for n in n_lo..=n_hi {
        if done.contains(&n) {
            eprintln!("skipping n={n}: row already present");
            continue;
        }
        let cfg = optimizer_config(n, seed, args.restarts, args.iters, args.grad);
        match run_threshold(family, n, &cfg, bracket, None) {
            Ok(rec) => {
                println!("n={n}: p* = {:.6} ({:.1}s)", rec.p_star, rec.wall_time_s);
                lines.push(format!(
                    "{},{},{:.6},{:.6e},{:.6e},{},{},{:.3}",
                    family.name(),
                    n,
                    rec.p_star,
                    rec.ci_at_bracket.0,
                    rec.ci_at_bracket.1,
                    seed,
                    cfg.restarts,
                    rec.wall_time_s
                ));
            }
            Err(e) => {
                eprintln!("n={n}: threshold search failed: {e}");
                failures += 1;
                continue;
            }
        }
        // rewrite after every row so long sweeps are resumable
        let mut body =
            format!("# symcap {} seed={seed} config={hash}\n", crate::TOOL_VERSION);
        body.push_str("family,n,p_star,ci_lo,ci_hi,seed,restarts,wall_time_s\n");
        for l in &lines {
            body.push_str(l);
            body.push('\n');
        }
        schema::write_atomic(&args.out, body.as_bytes())?;
    }
    if failures > 0 {
        return Err(CmdError::Numeric(format!("{failures} rows failed their bracket")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// degeneracy report
// ---------------------------------------------------------------------------

pub fn cmd_degeneracy_report(args: &DegeneracyArgs) -> CmdResult {
    if args.delta <= 0.0 {
        return Err(CmdError::Usage("delta must be positive".into()));
    }
    let family: ChannelFamily = args.channel.into();
    let channel = family_channel(family, args.p)?;
    let seed = resolve_seed(args.seed);
    let spec = ChannelSpec { kind: family.into(), p: args.p };
    let hash = schema::config_hash(&format!(
        "degeneracy-report {} p={} n={} delta={}",
        family.name(),
        args.p,
        args.n,
        args.delta
    ));

    let dist = degen::irrep_measurement_distribution(&channel, args.n)?;
    let two_row = degen::two_row_probability(&channel, args.n)?;
    let stats = degen::typical_set_stats(&channel, args.n, args.delta)?;

    let counts = if args.n <= degen::MAX_MEASURE_N {
        let dist_probs = channel.probabilities();
        let delta = args.delta;
        let (t_total, t_non) = degen::annihilation_counts(args.n, |w| {
            degen::is_strongly_typical(w, &dist_probs, delta)
        })?;
        let (a_total, a_non) = degen::annihilation_counts(args.n, |_| true)?;
        Some(schema::AnnihilationCounts {
            typical_total: t_total.to_string(),
            typical_non_annihilating: t_non.to_string(),
            all_total: a_total.to_string(),
            all_non_annihilating: a_non.to_string(),
        })
    } else {
        eprintln!("n={} exceeds the counting cap {}; omitting counts", args.n, degen::MAX_MEASURE_N);
        None
    };

    let report = schema::DegeneracyReport {
        meta: Some(Meta::new(seed, &hash)),
        channel: spec,
        n: args.n,
        delta: args.delta,
        distribution: dist
            .iter()
            .map(|(lam, p)| {
                let mut parts = [0u16; 4];
                for (i, &v) in lam.parts().iter().enumerate() {
                    parts[i] = v;
                }
                schema::DistributionRow { lambda: parts, probability: *p }
            })
            .collect(),
        two_row_prob: two_row,
        annihilation_counts: counts,
        typicality_stats: schema::TypicalityStats {
            mass: stats.mass,
            count: stats.count.to_string(),
            min_prob: stats.min_prob,
            max_prob: stats.max_prob,
        },
    };
    schema::write_json_atomic(&args.out, &report)?;

    let csv_path = args.csv.clone().unwrap_or_else(|| args.out.with_extension("csv"));
    let mut body = format!("# symcap {} seed={seed} config={hash}\n", crate::TOOL_VERSION);
    body.push_str("lambda1,lambda2,lambda3,lambda4,probability\n");
    for row in &report.distribution {
        body.push_str(&format!(
            "{},{},{},{},{:.12e}\n",
            row.lambda[0], row.lambda[1], row.lambda[2], row.lambda[3], row.probability
        ));
    }
    schema::write_atomic(&csv_path, body.as_bytes())?;

    println!(
        "n={} two_row_prob={:.6e} typical_mass={:.6} -> {} + {}",
        args.n,
        two_row,
        stats.mass,
        args.out.display(),
        csv_path.display()
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// oracle check
// ---------------------------------------------------------------------------

pub fn cmd_oracle_check(args: &OracleCheckArgs) -> CmdResult {
    if args.n_max > 8 {
        return Err(CmdError::Usage(format!(
            "the equivalence suite is capped at n=8 (requested {})",
            args.n_max
        )));
    }
    let seed = resolve_seed(args.seed);
    let families =
        [ChannelFamily::Depolarizing, ChannelFamily::IndependentXz, ChannelFamily::TwoPauli];
    let ps = [0.01, 0.05, 0.1, 0.15, 0.2];
    let mut max_diff = 0.0f64;
    let mut failures = 0usize;
    let t0 = Instant::now();
    for n in 1..=args.n_max {
        let basis = choose_spanning_states(n, seed)
            .map_err(|e| CmdError::Numeric(e.to_string()))?;
        for family in families {
            for p in ps {
                let channel = family_channel(family, p)?;
                let pre = driver::precompute_parallel(&channel, n, &basis)?;
                let report = driver::oracle_check_batch(
                    &channel,
                    &pre,
                    n,
                    args.cases,
                    seed,
                    driver::fast_path,
                );
                max_diff = max_diff.max(report.max_diff);
                failures += report.failures;
                println!(
                    "n={n} {:>7} p={p:<5}: max |fast - brute| = {:.3e} over {} cases{}",
                    family.name(),
                    report.max_diff,
                    report.cases,
                    if report.failures > 0 {
                        format!("  << {} FAILURES", report.failures)
                    } else {
                        String::new()
                    }
                );
            }
        }
    }
    println!(
        "oracle check: max diff {max_diff:.3e} (tolerance {:.0e}) in {:.1}s",
        driver::ORACLE_TOL,
        t0.elapsed().as_secs_f64()
    );
    if failures > 0 {
        return Err(CmdError::Numeric(format!(
            "{failures} cases deviated beyond {:.0e} (max {max_diff:.3e})",
            driver::ORACLE_TOL
        )));
    }
    Ok(())
}
