use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Command;
use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to reproduce a run's output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub library_version: String,
    pub command: String,
    pub command_line: Vec<String>,
    /// Fully resolved command; `replay` runs exactly this.
    pub invocation: Command,
    pub master_seed: Option<u64>,
    pub config: Value,
    pub parameters: Value,
    pub outputs: Vec<String>,
    pub notes: Vec<String>,
    pub threads: Option<usize>,
    pub wall_time_secs: f64,
}

pub fn load(path: &Path) -> CliResult<RunManifest> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::data(format!("{}: invalid manifest: {e}", path.display())))
}
