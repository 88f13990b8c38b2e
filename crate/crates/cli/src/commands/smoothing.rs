use std::path::Path;

use lrdresid::density::{density_grid, pr_density};
use lrdresid::regress::{bandwidth_default, fit_ls, fit_ls_known_intercept, nw_fit};
use serde_json::json;

use super::{to_value, Report};
use crate::args::{DensityArgs, FitArgs, FitMethod};
use crate::error::{CliError, CliResult};
use crate::input::read_columns;
use crate::output::{Cell, Table};

pub fn run_density(args: &DensityArgs, dir: &Path) -> CliResult<Report> {
    let sample = read_columns(&args.input, 1)?.columns.remove(0);
    if args.bandwidth.is_nan() || args.bandwidth <= 0.0 {
        return Err(CliError::config("bandwidth must be positive"));
    }
    let grid = density_grid(&sample, args.bandwidth, args.pad, args.points);
    let est = pr_density(&sample, args.bandwidth, &args.kernel, &grid)?;
    let mut table = Table::new("density", &["x", "fhat", "h", "n", "kernel"]);
    for (&x, &f) in est.grid.iter().zip(&est.values) {
        table.push(vec![
            Cell::from(x),
            Cell::from(f),
            Cell::from(args.bandwidth),
            Cell::from(sample.len()),
            Cell::from(args.kernel.as_str()),
        ]);
    }
    Ok(Report {
        outputs: table.write(dir, args.json)?,
        config: to_value(args)?,
        parameters: json!({"density": {"kernel": to_value(&args.kernel)?, "grid_points": grid.len()}}),
        ..Report::default()
    })
}

pub fn run_fit(args: &FitArgs, dir: &Path) -> CliResult<Report> {
    let mut cols = read_columns(&args.input, 2)?.columns;
    let y = cols.pop().expect("two columns");
    let x = cols.pop().expect("two columns");
    let n = x.len();
    let fit = match args.method {
        FitMethod::Ls => fit_ls(&x, &y)?,
        FitMethod::KnownIntercept => {
            let beta0 = args.beta0.ok_or_else(|| {
                CliError::config("--beta0 is required with --method known-intercept")
            })?;
            fit_ls_known_intercept(&x, &y, beta0)?
        }
        FitMethod::Nw => {
            let b = match args.bandwidth {
                Some(b) => b,
                None => bandwidth_default(n, args.bandwidth_c)?,
            };
            nw_fit(&x, &y, b, &args.kernel)?
        }
    };
    if !fit.excluded().is_empty() {
        eprintln!(
            "note: {} point(s) had an empty kernel window and were excluded",
            fit.excluded().len()
        );
    }

    let (b0, b1) = fit
        .coefficients()
        .map_or((None, None), |(a, b)| (Some(a), Some(b)));
    let mut summary = Table::new(
        "fit",
        &[
            "kind",
            "beta0_hat",
            "beta1_hat",
            "bandwidth",
            "n",
            "excluded_points",
        ],
    );
    summary.push(vec![
        Cell::from(fit.kind_name()),
        Cell::from(b0),
        Cell::from(b1),
        Cell::from(fit.bandwidth()),
        Cell::from(n),
        Cell::from(fit.excluded().len()),
    ]);
    let mut residuals = Table::new("residuals", &["i", "x", "y", "fitted", "residual"]);
    for i in 0..n {
        residuals.push(vec![
            Cell::from(i + 1),
            Cell::from(x[i]),
            Cell::from(y[i]),
            Cell::from(fit.fitted[i]),
            Cell::from(fit.residuals[i]),
        ]);
    }
    let mut outputs = summary.write(dir, args.json)?;
    outputs.extend(residuals.write(dir, args.json)?);
    Ok(Report {
        outputs,
        config: to_value(args)?,
        parameters: json!({"regress": {"method": args.method, "kernel": to_value(&args.kernel)?}}),
        ..Report::default()
    })
}
