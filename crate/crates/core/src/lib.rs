//! Residual empirical processes for regression models with long-memory errors.
//!
//! The crate simulates linear-process and fractional Gaussian noise errors,
//! fits parametric (least squares) and nonparametric (Nadaraya-Watson)
//! regressions, and evaluates the empirical processes of errors and residuals
//! together with their sup statistics. The [`mc`] module ties these together
//! into reproducible, parallel Monte Carlo experiments.
//!
//! Module map:
//!
//! - [`streams`]: counter-based random streams keyed by `(seed, stream_id)`.
//! - [`lrd`]: long-memory error generators and the Gaussian scale family.
//! - [`sums`]: the polynomial forms `eps_{n,r}`, their scalings, the reduction
//!   diagnostic and log-log slope fitting.
//! - [`regress`]: least squares, Nadaraya-Watson and kernels.
//! - [`empproc`]: empirical processes and exact sup statistics.
//! - [`density`]: Parzen-Rosenblatt estimation and the bandwidth diagnostic.
//! - [`mc`]: experiment harness and replication summaries.

pub mod conv;
pub mod density;
pub mod empproc;
mod error;
pub mod lrd;
pub mod mc;
pub mod regress;
pub mod streams;
pub mod sums;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use density::DensityEstimate;
pub use empproc::{EmpSupResult, Normalization};
pub use lrd::{Backend, DistributionSpec, ErrorPath, LrdSpec};
pub use mc::{ExperimentConfig, McSummary, Scenario, Statistic};
pub use regress::{FitKind, KernelSpec, RegressionFit};
pub use streams::{RngStream, StreamKey};
pub use sums::RateStudyResult;
