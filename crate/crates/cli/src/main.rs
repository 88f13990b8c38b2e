mod args;
mod commands;
mod error;
mod input;
mod manifest;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, CliResult};
use manifest::{RunManifest, MANIFEST_FILE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::config("--threads must be ≥ 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::config(e.to_string()))?;
    }
    let invocation = match cli.command {
        Command::Replay(r) => manifest::load(&r.manifest)?.invocation,
        other => other,
    };
    let invocation = commands::resolve_inputs(invocation)?;
    let dir = output::ensure_dir(&cli.out_dir)?;

    let start = Instant::now();
    let report = commands::run(&invocation, &dir)?;
    let manifest = RunManifest {
        tool: env!("CARGO_BIN_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        library_version: lrdresid::VERSION.to_string(),
        command: invocation.name().to_string(),
        command_line: std::env::args().collect(),
        invocation,
        master_seed: report.master_seed,
        config: report.config,
        parameters: report.parameters,
        outputs: report.outputs,
        notes: report.notes,
        threads: cli.threads,
        wall_time_secs: start.elapsed().as_secs_f64(),
    };
    output::write_json(&dir.join(MANIFEST_FILE), &serde_json::to_value(&manifest)?)?;
    for name in manifest
        .outputs
        .iter()
        .map(String::as_str)
        .chain([MANIFEST_FILE])
    {
        eprintln!("wrote {}", dir.join(name).display());
    }
    Ok(())
}
