//! Monte Carlo harness.
//!
//! Every replication draws from its own stream keyed by
//! `(experiment tag, scenario, n, replication)`, so results do not depend on
//! the number of worker threads or on scheduling. Within a replication all
//! statistics are computed from the same error path and predictors.

mod rates;
mod summary;
mod table1;

use serde::{Deserialize, Serialize};

use crate::empproc::{estimate_scale, ks_sup, l_sup, EmpSupResult};
use crate::lrd::{Backend, DistributionSpec};
use crate::regress::{
    bandwidth_default, fit_ls, fit_ls_known_intercept, nw_fit, KernelSpec, RegressionFit,
};
use crate::streams::RngStream;
use crate::{Error, Result};

pub use rates::{run_rate_study, run_reduction_study, RateConfig, ReductionPoint};
pub use summary::{mean, median, quantile_sorted, sample_sd, summarize, McSummary};
pub use table1::{run_table1, ScenarioRecords, Table1Result};

/// An error regime: i.i.d. Gaussian or long memory with parameter `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Iid,
    Lrd(f64),
}

impl Scenario {
    pub fn label(&self) -> String {
        match self {
            Scenario::Iid => "iid".to_string(),
            Scenario::Lrd(a) => format!("alpha={a}"),
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            Scenario::Iid => None,
            Scenario::Lrd(a) => Some(*a),
        }
    }

    /// Stream label; stable under reordering of the scenario list.
    pub(crate) fn stream_label(&self) -> u64 {
        match self {
            Scenario::Iid => u64::MAX,
            Scenario::Lrd(a) => a.to_bits(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Statistic {
    /// Errors against the true law.
    Kn,
    /// Errors against the law with estimated scale.
    Ln,
    /// Least-squares residuals, both coefficients estimated.
    KnHat,
    LnHat,
    /// Least-squares residuals with the intercept known.
    KnHatKnownB0,
    LnHatKnownB0,
    /// Nadaraya-Watson residuals.
    KnHatNw,
}

impl Statistic {
    pub const TABLE1: [Statistic; 6] = [
        Statistic::Kn,
        Statistic::Ln,
        Statistic::KnHat,
        Statistic::LnHat,
        Statistic::KnHatKnownB0,
        Statistic::LnHatKnownB0,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Statistic::Kn => "Kn",
            Statistic::Ln => "Ln",
            Statistic::KnHat => "KnHat",
            Statistic::LnHat => "LnHat",
            Statistic::KnHatKnownB0 => "KnHatKnownB0",
            Statistic::LnHatKnownB0 => "LnHatKnownB0",
            Statistic::KnHatNw => "KnHatNw",
        }
    }

    fn estimates_scale(&self) -> bool {
        matches!(
            self,
            Statistic::Ln | Statistic::LnHat | Statistic::LnHatKnownB0
        )
    }
}

impl std::fmt::Display for Statistic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Statistic::Kn,
            Statistic::Ln,
            Statistic::KnHat,
            Statistic::LnHat,
            Statistic::KnHatKnownB0,
            Statistic::LnHatKnownB0,
            Statistic::KnHatNw,
        ];
        all.into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown statistic '{s}'")))
    }
}

/// Law of the predictors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XLaw {
    Uniform { lo: f64, hi: f64 },
    Normal { mean: f64, sd: f64 },
}

impl XLaw {
    /// Predictor law of the dispersion table, N(0,1).
    pub const TABLE1: XLaw = XLaw::Normal { mean: 0.0, sd: 1.0 };

    pub fn sample(&self, stream: &mut RngStream, n: usize) -> Vec<f64> {
        match *self {
            XLaw::Uniform { lo, hi } => (0..n)
                .map(|_| lo + (hi - lo) * stream.next_uniform())
                .collect(),
            XLaw::Normal { mean, sd } => (0..n).map(|_| mean + sd * stream.next_normal()).collect(),
        }
    }
}

impl std::fmt::Display for XLaw {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XLaw::Uniform { lo, hi } => write!(f, "uniform:{lo}:{hi}"),
            XLaw::Normal { mean, sd } => write!(f, "normal:{mean}:{sd}"),
        }
    }
}

/// Parses `uniform`, `normal`, `uniform:LO:HI` or `normal:MEAN:SD`; the bare
/// names mean U(0,1) and N(0,1).
impl std::str::FromStr for XLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("invalid predictor law '{s}'"));
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let params: Vec<f64> = parts
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let (a, b) = match params.as_slice() {
            [] if name == "uniform" => (0.0, 1.0),
            [] if name == "normal" => (0.0, 1.0),
            [a, b] if a.is_finite() && b.is_finite() => (*a, *b),
            _ => return Err(bad()),
        };
        match name.as_str() {
            "uniform" if a < b => Ok(XLaw::Uniform { lo: a, hi: b }),
            "normal" if b > 0.0 => Ok(XLaw::Normal { mean: a, sd: b }),
            _ => Err(bad()),
        }
    }
}

/// `Y_i = beta0 + beta1 X_i + eps_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub beta0: f64,
    pub beta1: f64,
    pub x_law: XLaw,
}

impl Default for LinearModel {
    fn default() -> Self {
        Self {
            beta0: 1.0,
            beta1: 4.0,
            x_law: XLaw::Uniform { lo: 0.0, hi: 1.0 },
        }
    }
}

impl LinearModel {
    pub fn responses(&self, x: &[f64], errors: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(errors)
            .map(|(xi, e)| self.beta0 + self.beta1 * xi + e)
            .collect()
    }
}

/// Nadaraya-Watson settings: `b = c n^{-1/5}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NwConfig {
    pub bandwidth_c: f64,
    pub kernel: KernelSpec,
}

impl Default for NwConfig {
    fn default() -> Self {
        Self {
            bandwidth_c: 1.0,
            kernel: KernelSpec::epanechnikov(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub reps: usize,
    pub scenarios: Vec<Scenario>,
    pub backend: Backend,
    pub truncation: Option<usize>,
    pub model: LinearModel,
    pub statistics: Vec<Statistic>,
    pub master_seed: u64,
    pub nw: NwConfig,
}

impl ExperimentConfig {
    /// i.i.d. plus the four memory parameters, n = 100, all six statistics.
    pub fn table1(reps: usize, master_seed: u64) -> Self {
        let mut scenarios = vec![Scenario::Iid];
        scenarios.extend([0.8, 0.6, 0.4, 0.2].map(Scenario::Lrd));
        Self {
            n: 100,
            reps,
            scenarios,
            backend: Backend::CirculantFgn,
            truncation: None,
            model: LinearModel {
                x_law: XLaw::TABLE1,
                ..LinearModel::default()
            },
            statistics: Statistic::TABLE1.to_vec(),
            master_seed,
            nw: NwConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 2 {
            return Err(Error::Config("reps must be ≥ 2".into()));
        }
        if self.n < 3 {
            return Err(Error::Config("n must be ≥ 3".into()));
        }
        if self.scenarios.is_empty() {
            return Err(Error::Config("at least one scenario is required".into()));
        }
        if self.statistics.is_empty() {
            return Err(Error::Config("at least one statistic is required".into()));
        }
        for s in &self.scenarios {
            if let Scenario::Lrd(a) = s {
                crate::lrd::check_alpha(*a)?;
            }
        }
        Ok(())
    }
}

/// One statistic evaluated on one replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepValue {
    pub statistic: Statistic,
    pub sup: EmpSupResult,
    /// Estimated scale, for the estimated-parameter statistics.
    pub theta_hat: Option<f64>,
}

#[derive(Default)]
struct LazyFits {
    ls: Option<RegressionFit>,
    known: Option<RegressionFit>,
    nw: Option<RegressionFit>,
}

/// Evaluates `statistics` on one replication's errors and predictors.
pub fn replicate_statistics(
    errors: &[f64],
    x: &[f64],
    model: &LinearModel,
    nw: &NwConfig,
    statistics: &[Statistic],
) -> Result<Vec<RepValue>> {
    let truth = DistributionSpec::standard();
    let y = model.responses(x, errors);
    let mut fits = LazyFits::default();
    let mut out = Vec::with_capacity(statistics.len());
    for &stat in statistics {
        let sample: Vec<f64> = match stat {
            Statistic::Kn | Statistic::Ln => errors.to_vec(),
            Statistic::KnHat | Statistic::LnHat => {
                if fits.ls.is_none() {
                    fits.ls = Some(fit_ls(x, &y)?);
                }
                fits.ls.as_ref().unwrap().residuals.clone()
            }
            Statistic::KnHatKnownB0 | Statistic::LnHatKnownB0 => {
                if fits.known.is_none() {
                    fits.known = Some(fit_ls_known_intercept(x, &y, model.beta0)?);
                }
                fits.known.as_ref().unwrap().residuals.clone()
            }
            Statistic::KnHatNw => {
                if fits.nw.is_none() {
                    let b = bandwidth_default(x.len(), nw.bandwidth_c)?;
                    fits.nw = Some(nw_fit(x, &y, b, &nw.kernel)?);
                }
                fits.nw.as_ref().unwrap().evaluable_residuals()
            }
        };
        let (sup, theta_hat) = if stat.estimates_scale() {
            let theta = estimate_scale(&sample)?;
            (l_sup(&sample, theta)?, Some(theta))
        } else {
            (ks_sup(&sample, &truth)?, None)
        };
        out.push(RepValue {
            statistic: stat,
            sup,
            theta_hat,
        });
    }
    Ok(out)
}
