use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{median, replicate_statistics, sample_sd, LinearModel, NwConfig, RepValue, Statistic};
use crate::lrd::{Backend, DistributionSpec, LrdSpec, MaGenerator, PathGenerator};
use crate::streams::{make_stream, StreamKey};
use crate::sums::{default_sup_grid, reduction_diag, sigma_n1_exact, RateStudyResult};
use crate::{Error, Result};

const RATE_TAG: u64 = 0x0072_6174_6573; // "rates"
const REDUCTION_TAG: u64 = 0x7265_6475_6365; // "reduce"

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateConfig {
    pub alpha: f64,
    pub backend: Backend,
    pub truncation: Option<usize>,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    pub statistics: Vec<Statistic>,
    pub master_seed: u64,
    pub model: LinearModel,
    pub nw: NwConfig,
}

impl RateConfig {
    pub fn new(alpha: f64, n_grid: Vec<usize>, reps: usize, master_seed: u64) -> Self {
        Self {
            alpha,
            backend: Backend::TruncatedMa,
            truncation: None,
            n_grid,
            reps,
            statistics: vec![Statistic::Kn, Statistic::KnHat, Statistic::KnHatKnownB0],
            master_seed,
            model: LinearModel::default(),
            nw: NwConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::lrd::check_alpha(self.alpha)?;
        if self.n_grid.len() < 3 {
            return Err(Error::Config("n grid needs at least 3 points".into()));
        }
        if self.n_grid.iter().any(|&n| n < 3) {
            return Err(Error::Config("every grid n must be ≥ 3".into()));
        }
        if self.reps < 2 {
            return Err(Error::Config("reps must be ≥ 2".into()));
        }
        if self.statistics.is_empty() {
            return Err(Error::Config("at least one statistic is required".into()));
        }
        if self.backend == Backend::Iid {
            return Err(Error::Config(
                "rate studies need the ma or fgn backend".into(),
            ));
        }
        Ok(())
    }
}

/// Dispersion (replication standard deviation) of each n-normalized sup
/// statistic over the grid, with its log-log slope.
pub fn run_rate_study(config: &RateConfig) -> Result<Vec<(Statistic, RateStudyResult)>> {
    config.validate()?;
    let mut per_stat: Vec<Vec<f64>> = vec![Vec::new(); config.statistics.len()];
    for &n in &config.n_grid {
        let spec = LrdSpec::for_backend(config.backend, Some(config.alpha), n, config.truncation)?;
        let generator = PathGenerator::new(&spec, n)?;
        let reps: Vec<Vec<RepValue>> = (0..config.reps)
            .into_par_iter()
            .map(|rep| {
                let key = StreamKey::derive(
                    config.master_seed,
                    &[RATE_TAG, config.alpha.to_bits(), n as u64, rep as u64],
                );
                let mut stream = make_stream(key);
                let path = generator.sample(n, &mut stream);
                let x = config.model.x_law.sample(&mut stream, n);
                replicate_statistics(
                    &path.values,
                    &x,
                    &config.model,
                    &config.nw,
                    &config.statistics,
                )
            })
            .collect::<Result<_>>()?;
        for (k, slot) in per_stat.iter_mut().enumerate() {
            let values: Vec<f64> = reps.iter().map(|r| r[k].sup.sup_value).collect();
            slot.push(sample_sd(&values));
        }
    }
    config
        .statistics
        .iter()
        .zip(per_stat)
        .map(|(&stat, disp)| {
            Ok((
                stat,
                RateStudyResult::from_grid(config.n_grid.clone(), disp)?,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionPoint {
    pub n: usize,
    pub sigma_n1: f64,
    /// Median over replications of `sup |S_{n,p}| / sigma_{n,1}`.
    pub median_ratio: f64,
}

/// Reduction-principle diagnostic over a grid of sample sizes (moving-average
/// errors, standard normal marginal).
pub fn run_reduction_study(
    alpha: f64,
    n_grid: &[usize],
    reps: usize,
    p: u32,
    truncation: Option<usize>,
    master_seed: u64,
) -> Result<Vec<ReductionPoint>> {
    let dist = DistributionSpec::standard();
    n_grid
        .iter()
        .map(|&n| {
            let m = truncation.unwrap_or_else(|| LrdSpec::default_truncation(n));
            let spec = LrdSpec::truncated_ma(alpha, m)?;
            let sigma_n1 = sigma_n1_exact(&spec, n)?;
            let generator = MaGenerator::new(&spec, n)?;
            let ratios: Vec<f64> = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let key = StreamKey::derive(
                        master_seed,
                        &[REDUCTION_TAG, alpha.to_bits(), n as u64, rep as u64],
                    );
                    let path = generator.sample(&mut make_stream(key));
                    let grid = default_sup_grid(&path.values);
                    Ok(reduction_diag(&path, &dist, p, &grid)? / sigma_n1)
                })
                .collect::<Result<_>>()?;
            Ok(ReductionPoint {
                n,
                sigma_n1,
                median_ratio: median(&ratios),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut c = RateConfig::new(0.3, vec![64, 128], 10, 0);
        assert!(c.validate().is_err());
        c.n_grid.push(256);
        assert!(c.validate().is_ok());
        c.alpha = 1.2;
        assert!(c.validate().is_err());
    }

    #[test]
    fn small_study_is_reproducible() {
        let mut c = RateConfig::new(0.4, vec![64, 128, 256], 20, 3);
        c.truncation = Some(500);
        let a = run_rate_study(&c).unwrap();
        let b = run_rate_study(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        for (_, r) in &a {
            assert_eq!(r.dispersions.len(), 3);
            assert!(r.dispersions.iter().all(|&d| d > 0.0));
        }
    }
}
