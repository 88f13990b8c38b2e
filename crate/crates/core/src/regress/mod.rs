//! Parametric and nonparametric regression fits with their residuals.

mod kernel;
mod nw;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use kernel::{KernelName, KernelSpec};
pub use nw::{
    bandwidth_default, bandwidth_validity, nw_bias_theory, nw_fit, nw_predict, BandwidthValidity,
    Smooth,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FitKind {
    Linear {
        beta0_hat: f64,
        beta1_hat: f64,
        /// `(1/n) sum (X_j - mean X)^2`
        s_n: f64,
        intercept_known: bool,
    },
    NadarayaWatson {
        bandwidth: f64,
        kernel: KernelSpec,
        /// Kernel density estimate of the predictor at each `X_i`.
        density: Vec<f64>,
        /// Indices whose kernel window is empty; their fitted values and
        /// residuals are NaN.
        excluded: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub kind: FitKind,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl RegressionFit {
    pub fn n(&self) -> usize {
        self.fitted.len()
    }

    pub fn coefficients(&self) -> Option<(f64, f64)> {
        match self.kind {
            FitKind::Linear {
                beta0_hat,
                beta1_hat,
                ..
            } => Some((beta0_hat, beta1_hat)),
            FitKind::NadarayaWatson { .. } => None,
        }
    }

    pub fn bandwidth(&self) -> Option<f64> {
        match self.kind {
            FitKind::NadarayaWatson { bandwidth, .. } => Some(bandwidth),
            FitKind::Linear { .. } => None,
        }
    }

    pub fn excluded(&self) -> &[usize] {
        match &self.kind {
            FitKind::NadarayaWatson { excluded, .. } => excluded,
            FitKind::Linear { .. } => &[],
        }
    }

    /// Residuals at evaluable points (all of them for a linear fit).
    pub fn evaluable_residuals(&self) -> Vec<f64> {
        self.residuals
            .iter()
            .copied()
            .filter(|r| !r.is_nan())
            .collect()
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            FitKind::Linear {
                intercept_known: false,
                ..
            } => "linear",
            FitKind::Linear {
                intercept_known: true,
                ..
            } => "linear_known_intercept",
            FitKind::NadarayaWatson { .. } => "nadaraya_watson",
        }
    }
}

fn check_xy(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::TooFew {
            min: 3,
            got: x.len(),
        });
    }
    if x.iter().all(|&v| v == x[0]) {
        return Err(Error::DegenerateDesign);
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn linear_fit(x: &[f64], y: &[f64], b0: f64, b1: f64, s_n: f64, known: bool) -> RegressionFit {
    let fitted: Vec<f64> = x.iter().map(|&xi| b0 + b1 * xi).collect();
    let residuals = y.iter().zip(&fitted).map(|(yi, fi)| yi - fi).collect();
    RegressionFit {
        kind: FitKind::Linear {
            beta0_hat: b0,
            beta1_hat: b1,
            s_n,
            intercept_known: known,
        },
        fitted,
        residuals,
    }
}

/// Ordinary least squares for `Y = beta0 + beta1 X + eps`.
pub fn fit_ls(x: &[f64], y: &[f64]) -> Result<RegressionFit> {
    check_xy(x, y)?;
    let n = x.len() as f64;
    let xbar = mean(x);
    let ybar = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateDesign);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - xbar) * (b - ybar)).sum();
    let b1 = sxy / sxx;
    let b0 = ybar - b1 * xbar;
    Ok(linear_fit(x, y, b0, b1, sxx / n, false))
}

/// Least squares for the slope with the intercept held at `beta0`.
pub fn fit_ls_known_intercept(x: &[f64], y: &[f64], beta0: f64) -> Result<RegressionFit> {
    check_xy(x, y)?;
    let n = x.len() as f64;
    let sx2: f64 = x.iter().map(|v| v * v).sum();
    if sx2 == 0.0 {
        return Err(Error::DegenerateDesign);
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * (b - beta0)).sum();
    let xbar = mean(x);
    let s_n = x.iter().map(|v| (v - xbar).powi(2)).sum::<f64>() / n;
    Ok(linear_fit(x, y, beta0, sxy / sx2, s_n, true))
}

/// `Delta_i = m_hat(X_i) - m(X_i) = (b0_hat - b0) + (b1_hat - b1) X_i`.
pub fn deltas(
    fit: &RegressionFit,
    true_beta0: f64,
    true_beta1: f64,
    x: &[f64],
) -> Result<Vec<f64>> {
    let (b0, b1) = fit.coefficients().ok_or(Error::NotLinear)?;
    if x.len() != fit.n() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: fit.n(),
        });
    }
    Ok(x.iter()
        .map(|&xi| (b0 - true_beta0) + (b1 - true_beta1) * xi)
        .collect())
}
