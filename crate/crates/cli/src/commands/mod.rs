mod conjecture;
mod gof;
mod rates;
mod simulate;
mod smoothing;
mod table1;

use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::args::Command;
use crate::error::{CliError, CliResult};

/// What a command produced, for the manifest.
#[derive(Debug, Default)]
pub struct Report {
    pub outputs: Vec<String>,
    pub master_seed: Option<u64>,
    pub config: Value,
    pub parameters: Value,
    pub notes: Vec<String>,
}

pub fn run(command: &Command, dir: &Path) -> CliResult<Report> {
    match command {
        Command::Table1(a) => table1::run(a, dir),
        Command::Rates(a) => rates::run_rates(a, dir),
        Command::Reduction(a) => rates::run_reduction(a, dir),
        Command::Gof(a) => gof::run(a, dir),
        Command::Simulate(a) => simulate::run(a, dir),
        Command::Density(a) => smoothing::run_density(a, dir),
        Command::Fit(a) => smoothing::run_fit(a, dir),
        Command::Conjecture(a) => conjecture::run(a, dir),
        Command::Replay(_) => Err(CliError::config("a manifest cannot record a replay")),
    }
}

/// Makes input paths absolute so a manifest replays from any directory.
pub fn resolve_inputs(mut command: Command) -> CliResult<Command> {
    let input = match &mut command {
        Command::Gof(a) => Some(&mut a.input),
        Command::Density(a) => Some(&mut a.input),
        Command::Fit(a) => Some(&mut a.input),
        _ => None,
    };
    if let Some(path) = input {
        *path = canonical(path)?;
    }
    Ok(command)
}

fn canonical(path: &Path) -> CliResult<PathBuf> {
    path.canonicalize()
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))
}

fn stream_parameters() -> Value {
    json!({
        "generator": "ChaCha8",
        "normal_sampler": "ziggurat",
        "stream_key": "SplitMix64 fold of (seed, labels)",
    })
}

fn summary_parameters() -> Value {
    json!({
        "quantiles": "linear interpolation at position 1 + (k - 1) p",
        "sd_divisor": "k - 1",
        "sup": "absolute, exact over jump points",
        "scale_estimator": "root mean square",
    })
}

fn to_value<T: serde::Serialize>(value: &T) -> CliResult<Value> {
    Ok(serde_json::to_value(value)?)
}
