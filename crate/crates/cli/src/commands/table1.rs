use std::path::Path;

use lrdresid::mc::{run_table1, LinearModel, NwConfig};
use lrdresid::{Backend, ExperimentConfig, LrdSpec, Scenario, Statistic};
use serde_json::json;

use super::{stream_parameters, summary_parameters, to_value, Report};
use crate::args::Table1Args;
use crate::error::CliResult;
use crate::output::{Cell, Table};

pub fn run(args: &Table1Args, dir: &Path) -> CliResult<Report> {
    let mut scenarios = if args.no_iid {
        Vec::new()
    } else {
        vec![Scenario::Iid]
    };
    scenarios.extend(args.alphas.iter().map(|&a| Scenario::Lrd(a)));
    let config = ExperimentConfig {
        n: args.n,
        reps: args.reps,
        scenarios,
        backend: args.backend,
        truncation: args.truncation,
        model: LinearModel {
            beta0: args.beta0,
            beta1: args.beta1,
            x_law: args.x_law,
        },
        statistics: Statistic::TABLE1.to_vec(),
        master_seed: args.seed,
        nw: NwConfig::default(),
    };
    config.validate()?;
    let result = run_table1(&config)?;

    let mut table = Table::new(
        "table1",
        &[
            "scenario",
            "statistic",
            "q1",
            "q3",
            "sd",
            "mean",
            "reps",
            "n",
            "seed",
            "backend",
        ],
    );
    let per_scenario = config.statistics.len();
    for (rec, chunk) in result
        .records
        .iter()
        .zip(result.summaries.chunks(per_scenario))
    {
        for s in chunk {
            println!(
                "{:<10} {:<13} q1={:.4} q3={:.4} sd={:.4} mean={:.4}",
                s.scenario, s.statistic, s.q1, s.q3, s.sd, s.mean
            );
            table.push(vec![
                Cell::from(s.scenario.as_str()),
                Cell::from(s.statistic.as_str()),
                Cell::from(s.q1),
                Cell::from(s.q3),
                Cell::from(s.sd),
                Cell::from(s.mean),
                Cell::from(s.reps),
                Cell::from(config.n),
                Cell::from(config.master_seed),
                Cell::from(rec.backend.as_str()),
            ]);
        }
    }
    let mut outputs = table.write(dir, args.json)?;

    if args.raw {
        let mut raw = Table::new(
            "raw",
            &[
                "scenario",
                "rep",
                "statistic",
                "sup_value",
                "argmax_x",
                "theta_hat",
                "n",
                "alpha",
                "backend",
            ],
        );
        for rec in &result.records {
            for (rep, values) in rec.reps.iter().enumerate() {
                for v in values {
                    raw.push(vec![
                        Cell::from(rec.scenario.label()),
                        Cell::from(rep),
                        Cell::from(v.statistic.name()),
                        Cell::from(v.sup.sup_value),
                        Cell::from(v.sup.argmax_x),
                        Cell::from(v.theta_hat),
                        Cell::from(config.n),
                        Cell::from(rec.scenario.alpha()),
                        Cell::from(rec.backend.as_str()),
                    ]);
                }
            }
        }
        outputs.extend(raw.write(dir, args.json)?);
    }

    let truncation = match config.backend {
        Backend::TruncatedMa => Some(
            config
                .truncation
                .unwrap_or_else(|| LrdSpec::default_truncation(config.n)),
        ),
        _ => None,
    };
    let hurst: Vec<_> = args
        .alphas
        .iter()
        .map(|a| json!({"alpha": a, "hurst": 1.0 - a / 2.0}))
        .collect();
    Ok(Report {
        outputs,
        master_seed: Some(config.master_seed),
        config: to_value(&config)?,
        parameters: json!({
            "lrd": {"backend": config.backend.as_str(), "truncation": truncation, "hurst": hurst},
            "regress": {"model": to_value(&config.model)?, "known_intercept": config.model.beta0},
            "empproc": summary_parameters(),
            "streams": stream_parameters(),
        }),
        notes: Vec::new(),
    })
}
