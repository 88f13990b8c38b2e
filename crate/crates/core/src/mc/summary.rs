use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Replication summary: quartiles, standard deviation and mean.
///
/// Quartiles interpolate linearly between order statistics at position
/// `1 + (k - 1) p` (1-based); `sd` uses divisor `k - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub statistic: String,
    pub scenario: String,
    pub q1: f64,
    pub q3: f64,
    pub sd: f64,
    pub mean: f64,
    pub reps: usize,
}

impl McSummary {
    pub fn with_labels(
        mut self,
        statistic: impl Into<String>,
        scenario: impl Into<String>,
    ) -> Self {
        self.statistic = statistic.into();
        self.scenario = scenario.into();
        self
    }
}

/// Linear-interpolation quantile of already sorted values.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let pos = (sorted.len() - 1) as f64 * p;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn sample_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m).powi(2)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

pub fn median(values: &[f64]) -> f64 {
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    quantile_sorted(&s, 0.5)
}

pub fn summarize(values: &[f64]) -> Result<McSummary> {
    if values.len() < 2 {
        return Err(Error::TooFew {
            min: 2,
            got: values.len(),
        });
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(McSummary {
        statistic: String::new(),
        scenario: String::new(),
        q1: quantile_sorted(&sorted, 0.25),
        q3: quantile_sorted(&sorted, 0.75),
        sd: sample_sd(values),
        mean: mean(values),
        reps: values.len(),
    })
}
