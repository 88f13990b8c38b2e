use std::path::Path;

use lrdresid::lrd::gen_path;
use lrdresid::streams::{make_stream, StreamKey};
use lrdresid::LrdSpec;
use serde_json::json;

use super::{stream_parameters, to_value, Report};
use crate::args::SimulateArgs;
use crate::error::{CliError, CliResult};
use crate::output::{Cell, Table};

const SIMULATE_TAG: u64 = 0x7369_6d75_6c61; // "simula"

pub fn run(args: &SimulateArgs, dir: &Path) -> CliResult<Report> {
    if args.n == 0 {
        return Err(CliError::config("n must be ≥ 1"));
    }
    let spec = LrdSpec::for_backend(args.backend, args.alpha, args.n, args.truncation)?;
    let mut stream = make_stream(StreamKey::derive(args.seed, &[SIMULATE_TAG]));
    let path = gen_path(&spec, args.n, &mut stream)?;

    let mut table;
    if path.innovations.is_some() {
        let eta = path.scaled_innovations()?;
        table = Table::new("path", &["epsilon", "eta"]);
        for (&e, &h) in path.values.iter().zip(&eta) {
            table.push(vec![Cell::from(e), Cell::from(h)]);
        }
    } else {
        table = Table::new("path", &["epsilon"]);
        for &e in &path.values {
            table.push(vec![Cell::from(e)]);
        }
    }

    Ok(Report {
        outputs: table.write(dir, args.json)?,
        master_seed: Some(args.seed),
        config: to_value(args)?,
        parameters: json!({
            "lrd": to_value(&spec)?,
            "streams": stream_parameters(),
        }),
        notes: Vec::new(),
    })
}
