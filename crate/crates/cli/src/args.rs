use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use lrdresid::mc::XLaw;
use lrdresid::{Backend, KernelSpec, Statistic};
use serde::{Deserialize, Serialize};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "lrdresid",
    version,
    about = "Residual empirical processes under long-memory errors"
)]
pub struct Cli {
    /// Directory for output files and the run manifest.
    #[arg(long, global = true, env = "LRDRESID_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Cap on worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Dispersion table of sup statistics over i.i.d. and long-memory scenarios.
    Table1(Table1Args),
    /// Log-log rate study of statistic dispersions over a grid of n.
    Rates(RatesArgs),
    /// First-order reduction diagnostic over a grid of n.
    Reduction(ReductionArgs),
    /// Goodness-of-fit sup statistic for a sample of residuals.
    Gof(GofArgs),
    /// Simulate one error path.
    Simulate(SimulateArgs),
    /// Parzen-Rosenblatt density estimate of a sample.
    Density(DensityArgs),
    /// Fit a regression to an (x, y) CSV and write residuals.
    Fit(FitArgs),
    /// Exploratory bandwidth diagnostic for residual-based density estimation.
    Conjecture(ConjectureArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Table1(_) => "table1",
            Command::Rates(_) => "rates",
            Command::Reduction(_) => "reduction",
            Command::Gof(_) => "gof",
            Command::Simulate(_) => "simulate",
            Command::Density(_) => "density",
            Command::Fit(_) => "fit",
            Command::Conjecture(_) => "conjecture",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Table1Args {
    /// Sample size.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Replications per scenario.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Memory parameters of the long-memory scenarios.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.4,0.6,0.8")]
    pub alphas: Vec<f64>,
    /// Leave out the i.i.d. scenario.
    #[arg(long)]
    pub no_iid: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Error generator: fgn, ma or iid.
    #[arg(long, default_value = "fgn")]
    pub backend: Backend,
    /// Moving-average truncation lag (ma backend).
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Predictor law: uniform[:LO:HI] or normal[:MEAN:SD].
    #[arg(long, default_value = "normal")]
    pub x_law: XLaw,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub beta0: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub beta1: f64,
    /// Also write per-replication values to raw.csv.
    #[arg(long)]
    pub raw: bool,
    /// Mirror every CSV as JSON records.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RatesArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "512,1024,2048,4096,8192")]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    /// Statistics: Kn, Ln, KnHat, LnHat, KnHatKnownB0, LnHatKnownB0, KnHatNw.
    #[arg(long, value_delimiter = ',', default_value = "Kn,KnHat,KnHatKnownB0")]
    pub statistics: Vec<Statistic>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "ma")]
    pub backend: Backend,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, default_value = "uniform")]
    pub x_law: XLaw,
    /// Nadaraya-Watson bandwidth constant C in b = C n^(-1/5).
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth_c: f64,
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: KernelSpec,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReductionArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "512,2048,8192")]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    /// Expansion order of the remainder.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[command(group(ArgGroup::new("scale").required(true).args(["theta", "estimate_theta"])))]
pub struct GofArgs {
    /// CSV with residuals in the first column; a header row is optional.
    #[arg(long)]
    pub input: PathBuf,
    /// Scale of the hypothesized centered normal law.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Estimate the scale by the root mean square.
    #[arg(long)]
    pub estimate_theta: bool,
    /// Memory parameter used to report n sup / n^(1 - alpha/2).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "ma")]
    pub backend: Backend,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub bandwidth: f64,
    #[arg(long, default_value = "gaussian")]
    pub kernel: KernelSpec,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    /// Grid extension beyond the sample range, in bandwidths.
    #[arg(long, default_value_t = 3.0)]
    pub pad: f64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    Ls,
    KnownIntercept,
    Nw,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FitArgs {
    /// CSV with columns x, y; a header row is optional.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ls")]
    pub method: FitMethod,
    /// Known intercept (known-intercept method).
    #[arg(long, allow_negative_numbers = true)]
    pub beta0: Option<f64>,
    /// Nadaraya-Watson bandwidth; defaults to C n^(-1/5).
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub bandwidth_c: f64,
    #[arg(long, default_value = "epanechnikov")]
    pub kernel: KernelSpec,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ConjectureArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_delimiter = ',', default_value = "2048,4096,8192")]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    /// Bandwidth h = c n^(-exponent).
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.21)]
    pub exponent: f64,
    /// Evaluation point of the density.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, default_value = "gaussian")]
    pub kernel: KernelSpec,
    #[arg(long)]
    pub truncation: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written by a previous run.
    pub manifest: PathBuf,
}
