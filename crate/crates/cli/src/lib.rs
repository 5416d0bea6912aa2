//! Scenario harness for the geoq laboratory: configuration, run
//! orchestration, persistence and reporting. The `geoq` binary is a thin
//! wrapper over this library so integration tests can drive runs in-process.

pub mod config;
pub mod manifest;
pub mod output;
pub mod runs;

use std::path::PathBuf;

/// Output directory resolution: explicit flag, then `GEOQ_OUT`, then
/// `./geoq-out`; one subdirectory per scenario.
pub fn resolve_out_dir(flag: Option<PathBuf>, scenario: &str) -> PathBuf {
    let base = flag
        .or_else(|| std::env::var_os("GEOQ_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("geoq-out"));
    base.join(scenario)
}
