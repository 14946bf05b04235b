use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use rdars_core::ExperimentConfig;

use crate::error::CliError;

/// Everything needed to rerun an experiment.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub figure: String,
    pub band: String,
    /// SHA-256 of the resolved configuration.
    pub config_digest: String,
    pub tool_version: String,
    pub timestamp: String,
    pub output_paths: Vec<PathBuf>,
    pub distance_clamped: bool,
    pub config: ExperimentConfig,
}

/// Digest of the resolved config. Keys are hashed in struct order, so the
/// layout of the source file does not matter.
pub fn config_digest(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let canonical = serde_json::to_vec(cfg)?;
    Ok(hex::encode(Sha256::digest(&canonical)))
}
