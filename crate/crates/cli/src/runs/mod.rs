pub mod checks;
pub mod classical;
pub mod quantum;
pub mod report;

use crate::config::ConfigError;
use crate::manifest::RunManifest;
use thiserror::Error;

/// Run-level failures mapped onto the process exit codes: config problems
/// exit 2, integration failures exit 3 (partial outputs kept), eigensolver
/// failures exit 4.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("integration failure: {0}")]
    Integration(geoq::GeoqError),
    #[error("one or more scan points failed; partial outputs kept")]
    PartialIntegration(RunManifest),
    #[error("eigensolver did not converge; partial outputs flagged")]
    Eigensolver(RunManifest),
    #[error("io error: {0}")]
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Integration(_) | RunError::PartialIntegration(_) => 3,
            RunError::Eigensolver(_) => 4,
            RunError::Io(_) => 3,
        }
    }
}
