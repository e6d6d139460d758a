//! On-disk formats: JSON schemas for states, bases, threshold records and
//! reports, CSV layouts for sweeps, the config hash, and atomic writes.
//!
//! Every emitted file embeds a [`Meta`] block `{tool_version, seed,
//! config_hash}`; two runs with the same config hash produce byte-identical
//! numeric payloads (wall-clock fields are the one exception).

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use symcap_core::basis::{QubitState, SpanningBasis};
use symcap_core::channel::ChannelFamily;
use symcap_core::ci::SymmetricInput;
use symcap_core::optimizer::ThresholdRecord;
use symcap_core::C64;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: invalid JSON at {detail}")]
    Json { path: String, detail: String },

    #[error("{path}: schema violation at {field}: {message}")]
    Field { path: String, field: String, message: String },
}

pub type SchemaResult<T> = Result<T, SchemaError>;

/// Provenance block embedded in every emitted file.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Meta {
    pub tool_version: String,
    pub seed: u64,
    pub config_hash: String,
}

impl Meta {
    pub fn new(seed: u64, config_hash: &str) -> Self {
        Meta {
            tool_version: crate::TOOL_VERSION.to_string(),
            seed,
            config_hash: config_hash.to_string(),
        }
    }
}

/// First 16 hex chars of SHA-256 over the canonical config description.
pub fn config_hash(description: &str) -> String {
    let digest = Sha256::digest(description.as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Channel family plus parameter, `{"kind": "dep", "p": 0.06}`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct ChannelSpec {
    pub kind: FamilyTag,
    pub p: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    Dep,
    Xz,
    #[serde(rename = "2pauli")]
    TwoPauli,
}

impl From<ChannelFamily> for FamilyTag {
    fn from(f: ChannelFamily) -> Self {
        match f {
            ChannelFamily::Depolarizing => FamilyTag::Dep,
            ChannelFamily::IndependentXz => FamilyTag::Xz,
            ChannelFamily::TwoPauli => FamilyTag::TwoPauli,
        }
    }
}

impl From<FamilyTag> for ChannelFamily {
    fn from(t: FamilyTag) -> Self {
        match t {
            FamilyTag::Dep => ChannelFamily::Depolarizing,
            FamilyTag::Xz => ChannelFamily::IndependentXz,
            FamilyTag::TwoPauli => ChannelFamily::TwoPauli,
        }
    }
}

// ---------------------------------------------------------------------------
// Symmetric input state files
// ---------------------------------------------------------------------------

/// `{n, alpha0: [[re,im],…], alpha1: [[re,im],…]}` with `n+1` pairs per row.
/// This is also the persistence format for optimizer results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub n: usize,
    pub alpha0: Vec<[f64; 2]>,
    pub alpha1: Vec<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ci: Option<f64>,
}

impl StateFile {
    pub fn from_input(input: &SymmetricInput, meta: Option<Meta>, ci: Option<f64>) -> Self {
        let row = |i: usize| input.row(i).iter().map(|z| [z.re, z.im]).collect();
        StateFile { meta, n: input.n(), alpha0: row(0), alpha1: row(1), ci }
    }

    pub fn to_input(&self, path: &str) -> SchemaResult<SymmetricInput> {
        for (name, row) in [("alpha0", &self.alpha0), ("alpha1", &self.alpha1)] {
            if row.len() != self.n + 1 {
                return Err(SchemaError::Field {
                    path: path.to_string(),
                    field: name.to_string(),
                    message: format!("expected {} [re,im] pairs, found {}", self.n + 1, row.len()),
                });
            }
        }
        let to_c = |row: &Vec<[f64; 2]>| row.iter().map(|p| C64::new(p[0], p[1])).collect();
        SymmetricInput::new(to_c(&self.alpha0), to_c(&self.alpha1)).map_err(|e| {
            SchemaError::Field {
                path: path.to_string(),
                field: "alpha0/alpha1".to_string(),
                message: e.to_string(),
            }
        })
    }
}

// ---------------------------------------------------------------------------
// Spanning-basis cache files
// ---------------------------------------------------------------------------

/// `{n, seed, states: [[re(c0),im(c0),re(c1),im(c1)],…], condition_number}`,
/// keyed by the channel it was precomputed for.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisCacheFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub channel: ChannelSpec,
    pub n: usize,
    pub seed: u64,
    pub states: Vec<[f64; 4]>,
    pub condition_number: f64,
}

impl BasisCacheFile {
    pub fn from_basis(basis: &SpanningBasis, channel: ChannelSpec, meta: Option<Meta>) -> Self {
        BasisCacheFile {
            meta,
            channel,
            n: basis.n(),
            seed: basis.seed(),
            states: basis
                .states()
                .iter()
                .map(|s| [s.c0.re, s.c0.im, s.c1.re, s.c1.im])
                .collect(),
            condition_number: basis.condition_number(),
        }
    }

    pub fn to_basis(&self, path: &str) -> SchemaResult<SpanningBasis> {
        if self.states.len() != self.n + 1 {
            return Err(SchemaError::Field {
                path: path.to_string(),
                field: "states".to_string(),
                message: format!("expected {} states, found {}", self.n + 1, self.states.len()),
            });
        }
        let states: Vec<QubitState> = self
            .states
            .iter()
            .map(|s| QubitState::new(C64::new(s[0], s[1]), C64::new(s[2], s[3])))
            .collect();
        SpanningBasis::from_states(self.n, self.seed, states).map_err(|e| SchemaError::Field {
            path: path.to_string(),
            field: "states".to_string(),
            message: e.to_string(),
        })
    }
}

// ---------------------------------------------------------------------------
// Threshold records
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ThresholdFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub family: FamilyTag,
    pub n: usize,
    pub p_star: f64,
    pub ci_at_bracket: [f64; 2],
    pub best_input: StateFile,
    pub seed: u64,
    pub wall_time_s: f64,
}

impl ThresholdFile {
    pub fn from_record(rec: &ThresholdRecord, meta: Option<Meta>) -> Self {
        ThresholdFile {
            meta,
            family: rec.family.into(),
            n: rec.n,
            p_star: rec.p_star,
            ci_at_bracket: [rec.ci_at_bracket.0, rec.ci_at_bracket.1],
            best_input: StateFile::from_input(&rec.best_input, None, Some(rec.ci_at_bracket.0)),
            seed: rec.seed,
            wall_time_s: rec.wall_time_s,
        }
    }
}

// ---------------------------------------------------------------------------
// Degeneracy report
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegeneracyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
    pub channel: ChannelSpec,
    pub n: usize,
    pub delta: f64,
    /// `P(λ)` rows, partitions as four parts.
    pub distribution: Vec<DistributionRow>,
    pub two_row_prob: f64,
    /// Present only for `n` within the counting cap.
    pub annihilation_counts: Option<AnnihilationCounts>,
    pub typicality_stats: TypicalityStats,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistributionRow {
    pub lambda: [u16; 4],
    pub probability: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnnihilationCounts {
    /// Over the strongly δ-typical weight classes.
    pub typical_total: String,
    pub typical_non_annihilating: String,
    /// Over all weight classes.
    pub all_total: String,
    pub all_non_annihilating: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypicalityStats {
    pub mass: f64,
    pub count: String,
    pub min_prob: f64,
    pub max_prob: f64,
}

// ---------------------------------------------------------------------------
// IO helpers
// ---------------------------------------------------------------------------

/// Serialize as pretty JSON and write atomically (temp file + rename).
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> SchemaResult<()> {
    let body = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    write_atomic(path, body.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> SchemaResult<()> {
    let io_err = |source| SchemaError::Io { path: path.display().to_string(), source };
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(io_err)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)
            .map_err(|source| SchemaError::Io { path: tmp.display().to_string(), source })?;
        f.write_all(bytes)
            .map_err(|source| SchemaError::Io { path: tmp.display().to_string(), source })?;
        f.sync_all().ok();
    }
    fs::rename(&tmp, path).map_err(io_err)
}

/// Parse a JSON file, reporting the failing location as a schema path.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> SchemaResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|source| SchemaError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|e| SchemaError::Json {
        path: path.display().to_string(),
        detail: format!("line {} column {}: {e}", e.line(), e.column()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use symcap_core::basis::choose_spanning_states;

    #[test]
    fn state_file_round_trip() {
        let input = symcap_core::optimizer::plus_minus_pair(4);
        let file = StateFile::from_input(&input, Some(Meta::new(7, "abc")), Some(0.5));
        let text = serde_json::to_string(&file).unwrap();
        let parsed: StateFile = serde_json::from_str(&text).unwrap();
        let back = parsed.to_input("mem").unwrap();
        assert_eq!(back.n(), 4);
        for i in 0..2 {
            for (a, b) in input.row(i).iter().zip(back.row(i)) {
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn state_file_shape_errors_name_the_field() {
        let bad = StateFile {
            meta: None,
            n: 3,
            alpha0: vec![[1.0, 0.0]; 3], // should be 4
            alpha1: vec![[1.0, 0.0]; 4],
            ci: None,
        };
        let err = bad.to_input("x.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("alpha0") && msg.contains("x.json"), "{msg}");
    }

    #[test]
    fn basis_cache_round_trip_is_bitwise() {
        let basis = choose_spanning_states(5, 9).unwrap();
        let spec = ChannelSpec { kind: FamilyTag::Dep, p: 0.06 };
        let file = BasisCacheFile::from_basis(&basis, spec, None);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: BasisCacheFile = serde_json::from_str(&text).unwrap();
        let back = parsed.to_basis("mem").unwrap();
        // identical states bit for bit, hence identical downstream blocks
        for (a, b) in basis.states().iter().zip(back.states()) {
            assert_eq!(a.c0.re.to_bits(), b.c0.re.to_bits());
            assert_eq!(a.c1.im.to_bits(), b.c1.im.to_bits());
        }
    }

    #[test]
    fn config_hash_is_stable_and_sensitive() {
        let a = config_hash("threshold dep n=5 seed=1");
        let b = config_hash("threshold dep n=5 seed=1");
        let c = config_hash("threshold dep n=5 seed=2");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 16);
    }
}
