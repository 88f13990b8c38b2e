use std::path::Path;

use lrdresid::mc::{run_rate_study, run_reduction_study, LinearModel, NwConfig, RateConfig};
use lrdresid::{Backend, LrdSpec};
use serde_json::json;

use super::{stream_parameters, summary_parameters, to_value, Report};
use crate::args::{RatesArgs, ReductionArgs};
use crate::error::CliResult;
use crate::output::{Cell, Table};

pub fn run_rates(args: &RatesArgs, dir: &Path) -> CliResult<Report> {
    let config = RateConfig {
        alpha: args.alpha,
        backend: args.backend,
        truncation: args.truncation,
        n_grid: args.n_grid.clone(),
        reps: args.reps,
        statistics: args.statistics.clone(),
        master_seed: args.seed,
        model: LinearModel {
            x_law: args.x_law,
            ..LinearModel::default()
        },
        nw: NwConfig {
            bandwidth_c: args.bandwidth_c,
            kernel: args.kernel,
        },
    };
    config.validate()?;
    let results = run_rate_study(&config)?;

    let mut table = Table::new(
        "rates",
        &[
            "n",
            "reps",
            "statistic",
            "dispersion",
            "slope",
            "slope_se",
            "alpha",
            "backend",
            "seed",
        ],
    );
    for (stat, res) in &results {
        println!(
            "{:<13} slope={:.4} se={:.4}",
            stat.name(),
            res.slope,
            res.slope_se
        );
        for (&n, &d) in res.n_grid.iter().zip(&res.dispersions) {
            table.push(vec![
                Cell::from(n),
                Cell::from(config.reps),
                Cell::from(stat.name()),
                Cell::from(d),
                Cell::from(res.slope),
                Cell::from(res.slope_se),
                Cell::from(config.alpha),
                Cell::from(config.backend.as_str()),
                Cell::from(config.master_seed),
            ]);
        }
    }
    let truncation: Vec<_> = match config.backend {
        Backend::TruncatedMa => config
            .n_grid
            .iter()
            .map(|&n| json!({"n": n, "m": config.truncation.unwrap_or_else(|| LrdSpec::default_truncation(n))}))
            .collect(),
        _ => Vec::new(),
    };
    Ok(Report {
        outputs: table.write(dir, args.json)?,
        master_seed: Some(config.master_seed),
        config: to_value(&config)?,
        parameters: json!({
            "lrd": {"backend": config.backend.as_str(), "truncation": truncation, "hurst": 1.0 - config.alpha / 2.0},
            "regress": {"model": to_value(&config.model)?, "nw": to_value(&config.nw)?},
            "empproc": summary_parameters(),
            "sums": {"slope": "least squares on (log n, log dispersion)"},
            "streams": stream_parameters(),
        }),
        notes: Vec::new(),
    })
}

pub fn run_reduction(args: &ReductionArgs, dir: &Path) -> CliResult<Report> {
    let points = run_reduction_study(
        args.alpha,
        &args.n_grid,
        args.reps,
        args.order,
        args.truncation,
        args.seed,
    )?;
    let mut table = Table::new(
        "reduction",
        &[
            "n",
            "sigma_n1",
            "median_ratio",
            "alpha",
            "order",
            "reps",
            "seed",
        ],
    );
    for p in &points {
        println!("n={:<8} median sup|S|/sigma={:.4}", p.n, p.median_ratio);
        table.push(vec![
            Cell::from(p.n),
            Cell::from(p.sigma_n1),
            Cell::from(p.median_ratio),
            Cell::from(args.alpha),
            Cell::from(args.order as u64),
            Cell::from(args.reps),
            Cell::from(args.seed),
        ]);
    }
    Ok(Report {
        outputs: table.write(dir, args.json)?,
        master_seed: Some(args.seed),
        config: to_value(args)?,
        parameters: json!({
            "lrd": {"backend": "ma", "truncation": args.truncation},
            "sums": {"grid_points": lrdresid::sums::SUP_GRID_POINTS, "sup": "jump points plus grid"},
            "streams": stream_parameters(),
        }),
        notes: Vec::new(),
    })
}
