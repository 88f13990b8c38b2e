use std::path::Path;

use lrdresid::density::{conjecture_diag, BandwidthRule, ConjectureConfig};
use serde_json::json;

use super::{stream_parameters, to_value, Report};
use crate::args::ConjectureArgs;
use crate::error::CliResult;
use crate::output::{Cell, Table};

const NOTE: &str = "exploratory diagnostic: dispersions only, no limit law is asserted";

pub fn run(args: &ConjectureArgs, dir: &Path) -> CliResult<Report> {
    let mut config = ConjectureConfig::new(
        args.alpha,
        args.n_grid.clone(),
        args.reps,
        BandwidthRule::power(args.c, args.exponent),
        args.seed,
    );
    config.x0 = args.x0;
    config.kernel = args.kernel;
    config.truncation = args.truncation;
    let rows = conjecture_diag(&config)?;

    eprintln!("note: {NOTE}");
    let mut table = Table::new(
        "conjecture",
        &["n", "h", "dispersion", "feasible_bias", "feasible_lrd"],
    );
    for r in &rows {
        println!("n={:<8} h={:.4} dispersion={:.4}", r.n, r.h, r.dispersion);
        table.push(vec![
            Cell::from(r.n),
            Cell::from(r.h),
            Cell::from(r.dispersion),
            Cell::from(r.feasible_bias),
            Cell::from(r.feasible_lrd),
        ]);
    }
    Ok(Report {
        outputs: table.write(dir, args.json)?,
        master_seed: Some(args.seed),
        config: to_value(&config)?,
        parameters: json!({
            "density": {"bandwidth": to_value(&config.bandwidth)?, "sigma_n2": "n^(1 - alpha)"},
            "streams": stream_parameters(),
        }),
        notes: vec![NOTE.to_string()],
    })
}
