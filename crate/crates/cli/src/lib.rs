//! Config loading, experiment dispatch and result files for `rdars-sim`.

pub mod commands;
pub mod config;
pub mod error;
pub mod figure;
pub mod manifest;
pub mod output;

pub use commands::{run_command, RunOptions};
pub use config::{load_config, ConfigFile, Overrides};
pub use error::CliError;
pub use figure::Figure;
pub use manifest::{config_digest, RunManifest};
