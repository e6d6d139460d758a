//! Command-line surface, persistence formats, and the parallel run driver for
//! the symmetric-subspace coherent-information toolkit in `symcap-core`.

pub mod commands;
pub mod driver;
pub mod schema;

pub use schema::{ChannelSpec, Meta, SchemaError};

/// Tool version stamped into every emitted file.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit codes: 0 success, 1 numeric/bracket failure, 2 usage/schema error.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
