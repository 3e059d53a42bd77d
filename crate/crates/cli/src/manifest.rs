use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::CliError;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SCHEMA_VERSION: u32 = 1;

/// Everything needed to repeat a run. Deliberately free of timestamps, host
/// names and paths so that identical runs write identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: u32,
    pub netspill_version: String,
    pub cli_version: String,
    pub command: String,
    pub master_seed: u64,
    /// The resolved configuration, with command-line overrides applied.
    pub config: RunConfig,
    /// Files written by the run, relative to the output directory.
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(config: RunConfig, outputs: Vec<String>) -> Self {
        Manifest {
            schema: SCHEMA_VERSION,
            netspill_version: netspill::VERSION.to_string(),
            cli_version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.command.map_or("", |c| c.name()).to_string(),
            master_seed: config.master_seed.unwrap_or_default(),
            config,
            outputs,
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let m: Manifest =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if m.schema != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "{}: manifest schema {} is not {SCHEMA_VERSION}",
                path.display(),
                m.schema
            )));
        }
        m.config.check_ranges()?;
        Ok(m)
    }
}
