use std::path::Path;

use lrdresid::empproc::{estimate_scale, ks_sup, l_sup};
use lrdresid::sums::sigma_nr_asymptotic;
use lrdresid::DistributionSpec;
use serde_json::{json, Value};

use super::{summary_parameters, to_value, Report};
use crate::args::GofArgs;
use crate::error::{CliError, CliResult};
use crate::input::read_columns;
use crate::output::{fmt_f64, Cell, Table};

pub fn run(args: &GofArgs, dir: &Path) -> CliResult<Report> {
    let sample = read_columns(&args.input, 1)?.columns.remove(0);
    let n = sample.len();
    let (sup, theta, theta_hat) = if args.estimate_theta {
        let theta_hat = estimate_scale(&sample).map_err(|e| CliError::data(e.to_string()))?;
        (l_sup(&sample, theta_hat)?, theta_hat, Some(theta_hat))
    } else {
        let theta = args
            .theta
            .expect("clap requires --theta or --estimate-theta");
        (
            ks_sup(&sample, &DistributionSpec::gaussian(theta)?)?,
            theta,
            None,
        )
    };
    let sigma_scaled = match args.alpha {
        Some(alpha) => Some(sup.raw_sup() / sigma_nr_asymptotic(alpha, n, 1)?),
        None => None,
    };
    let sqrt_n_sup = sup.rescaled_sqrt_n().scaled_value;

    let mut table = Table::new(
        "gof",
        &[
            "n",
            "theta",
            "theta_hat",
            "theta_hat_sq",
            "sup",
            "sqrt_n_sup",
            "alpha",
            "sigma_scaled_sup",
            "argmax_x",
        ],
    );
    table.push(vec![
        Cell::from(n),
        Cell::from(theta),
        Cell::from(theta_hat),
        Cell::from(theta_hat.map(|t| t * t)),
        Cell::from(sup.sup_value),
        Cell::from(sqrt_n_sup),
        Cell::from(args.alpha),
        Cell::from(sigma_scaled),
        Cell::from(sup.argmax_x),
    ]);
    let outputs = table.write(dir, args.json)?;

    let record = match table.records() {
        Value::Array(mut rows) => rows.remove(0),
        _ => unreachable!("records are an array"),
    };
    if args.json {
        println!("{}", serde_json::to_string_pretty(&record)?);
    } else if let Value::Object(fields) = &record {
        for (key, value) in fields {
            match value.as_f64() {
                Some(v) if !value.is_u64() => println!("{key}: {}", fmt_f64(v)),
                _ if value.is_null() => {}
                _ => println!("{key}: {value}"),
            }
        }
    }

    Ok(Report {
        outputs,
        master_seed: None,
        config: to_value(args)?,
        parameters: json!({
            "empproc": summary_parameters(),
            "lrd": {"family": "centered normal, scale theta"},
            "sums": {"sigma_n1": "n^(1 - alpha/2)"},
        }),
        notes: Vec::new(),
    })
}
