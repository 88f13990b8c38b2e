//! Parzen-Rosenblatt density estimation from residuals, and the Monte Carlo
//! diagnostic for the large-bandwidth scaling of the residual-based
//! estimator. The diagnostic is exploratory: it reports dispersions and
//! bandwidth feasibility flags and asserts nothing about limits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lrd::{std_normal_pdf, LrdSpec, MaGenerator};
use crate::mc::{sample_sd, LinearModel};
use crate::regress::{fit_ls, KernelSpec};
use crate::streams::{make_stream, StreamKey};
use crate::sums::sigma_nr_asymptotic;
use crate::{Error, Result};

const CONJECTURE_TAG: u64 = 0x0064_6668_6174; // "dfhat"

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub bandwidth: f64,
    pub kernel: KernelSpec,
}

impl DensityEstimate {
    /// Trapezoid rule over the grid.
    pub fn integral(&self) -> f64 {
        self.grid
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| 0.5 * (x[1] - x[0]) * (v[0] + v[1]))
            .sum()
    }
}

/// `f_hat(x) = (1/(n h)) sum_i K((x - e_i)/h)`.
pub fn pr_at(sample: &[f64], h: f64, kernel: &KernelSpec, x: f64) -> f64 {
    let nh = sample.len() as f64 * h;
    sample.iter().map(|e| kernel.eval((x - e) / h)).sum::<f64>() / nh
}

pub fn pr_density(
    sample: &[f64],
    h: f64,
    kernel: &KernelSpec,
    grid: &[f64],
) -> Result<DensityEstimate> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::NonPositive {
            name: "bandwidth",
            value: h,
        });
    }
    if sample.is_empty() {
        return Err(Error::TooFew { min: 1, got: 0 });
    }
    let values = grid
        .par_iter()
        .map(|&x| pr_at(sample, h, kernel, x))
        .collect();
    Ok(DensityEstimate {
        grid: grid.to_vec(),
        values,
        bandwidth: h,
        kernel: *kernel,
    })
}

/// Grid spanning the sample range extended by `pad` bandwidths.
pub fn density_grid(sample: &[f64], h: f64, pad: f64, points: usize) -> Vec<f64> {
    let lo = sample.iter().cloned().fold(f64::INFINITY, f64::min) - pad * h;
    let hi = sample.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + pad * h;
    let step = (hi - lo) / (points.max(2) - 1) as f64;
    (0..points.max(2)).map(|i| lo + step * i as f64).collect()
}

/// Bandwidth sequence `h = c n^{-exponent}`; a constant bandwidth has
/// exponent 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthRule {
    pub c: f64,
    pub exponent: f64,
}

impl BandwidthRule {
    pub fn constant(c: f64) -> Self {
        Self { c, exponent: 0.0 }
    }

    pub fn power(c: f64, exponent: f64) -> Self {
        Self { c, exponent }
    }

    pub fn at(&self, n: usize) -> f64 {
        self.c * (n as f64).powf(-self.exponent)
    }

    /// `n h^5 -> 0`
    pub fn bias_negligible(&self) -> bool {
        1.0 - 5.0 * self.exponent < 0.0
    }

    /// `sigma_{n,2} h -> infinity`, with `sigma_{n,2} ~ n^{1 - alpha}`
    pub fn large_bandwidth(&self, alpha: f64) -> bool {
        (1.0 - alpha) - self.exponent > 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjectureConfig {
    pub alpha: f64,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    pub bandwidth: BandwidthRule,
    pub x0: f64,
    pub kernel: KernelSpec,
    pub truncation: Option<usize>,
    pub model: LinearModel,
    pub master_seed: u64,
}

impl ConjectureConfig {
    pub fn new(
        alpha: f64,
        n_grid: Vec<usize>,
        reps: usize,
        bandwidth: BandwidthRule,
        master_seed: u64,
    ) -> Self {
        Self {
            alpha,
            n_grid,
            reps,
            bandwidth,
            x0: 0.0,
            kernel: KernelSpec::gaussian(),
            truncation: None,
            model: LinearModel::default(),
            master_seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub n: usize,
    pub h: f64,
    /// Replication sd of `n / sigma_{n,2} * (f_hat(x0) - f(x0))`.
    pub dispersion: f64,
    pub feasible_bias: bool,
    pub feasible_lrd: bool,
}

/// Monte Carlo dispersion of the scaled residual-based density error at `x0`,
/// with `sigma_{n,2}` replaced by its power-law proxy.
pub fn conjecture_diag(config: &ConjectureConfig) -> Result<Vec<ConjectureRow>> {
    if config.reps < 2 {
        return Err(Error::Config("reps must be ≥ 2".into()));
    }
    let feasible_bias = config.bandwidth.bias_negligible();
    let feasible_lrd = config.bandwidth.large_bandwidth(config.alpha);
    let truth = std_normal_pdf(config.x0);
    config
        .n_grid
        .iter()
        .map(|&n| {
            let sigma2 = sigma_nr_asymptotic(config.alpha, n, 2)?;
            let h = config.bandwidth.at(n);
            let m = config
                .truncation
                .unwrap_or_else(|| LrdSpec::default_truncation(n));
            let spec = LrdSpec::truncated_ma(config.alpha, m)?;
            let generator = MaGenerator::new(&spec, n)?;
            let values: Vec<f64> = (0..config.reps)
                .into_par_iter()
                .map(|rep| {
                    let key = StreamKey::derive(
                        config.master_seed,
                        &[CONJECTURE_TAG, config.alpha.to_bits(), n as u64, rep as u64],
                    );
                    let mut stream = make_stream(key);
                    let path = generator.sample(&mut stream);
                    let x = config.model.x_law.sample(&mut stream, n);
                    let y = config.model.responses(&x, &path.values);
                    let fit = fit_ls(&x, &y)?;
                    let fhat = pr_at(&fit.residuals, h, &config.kernel, config.x0);
                    Ok(n as f64 / sigma2 * (fhat - truth))
                })
                .collect::<Result<_>>()?;
            Ok(ConjectureRow {
                n,
                h,
                dispersion: sample_sd(&values),
                feasible_bias,
                feasible_lrd,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn symmetric_sample() {
        let grid: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.1).collect();
        for k in [KernelSpec::epanechnikov(), KernelSpec::gaussian()] {
            let est = pr_density(&[-0.7, 0.7], 0.5, &k, &grid).unwrap();
            let n = grid.len();
            for i in 0..n {
                assert_abs_diff_eq!(est.values[i], est.values[n - 1 - i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn single_point_and_pair() {
        let h = 0.3;
        let k = KernelSpec::gaussian();
        assert_abs_diff_eq!(
            pr_at(&[0.0], h, &k, 0.0),
            std_normal_pdf(0.0) / h,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            pr_at(&[-1.0, 1.0], 1.0, &k, 0.0),
            0.241_970_724_519_143_37,
            epsilon = 1e-15
        );
    }

    #[test]
    fn integrates_to_one() {
        let sample = [-1.2, -0.3, 0.1, 0.4, 2.0];
        for k in [KernelSpec::epanechnikov(), KernelSpec::gaussian()] {
            let h = 0.4;
            let grid = density_grid(&sample, h, 5.0, 4001);
            let est = pr_density(&sample, h, &k, &grid).unwrap();
            let total = est.integral();
            assert!((0.99..=1.001).contains(&total), "{k:?}: {total}");
            assert!(est.values.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let k = KernelSpec::gaussian();
        assert!(pr_density(&[0.0], 0.0, &k, &[0.0]).is_err());
        assert!(pr_density(&[], 1.0, &k, &[0.0]).is_err());
    }

    #[test]
    fn feasibility_flags() {
        let c = BandwidthRule::constant(0.5);
        assert!(!c.bias_negligible());
        assert!(c.large_bandwidth(0.3));
        let p = BandwidthRule::power(1.0, 0.21);
        assert!(p.bias_negligible());
        assert!(p.large_bandwidth(0.3));
    }

    #[test]
    fn ise_improves_with_smaller_bandwidth() {
        let mut s = make_stream(StreamKey::new(17, 0));
        let n = 10_000;
        let sample: Vec<f64> = (0..n).map(|_| s.next_normal()).collect();
        let k = KernelSpec::gaussian();
        let grid: Vec<f64> = (0..=400).map(|i| -5.0 + i as f64 * 0.025).collect();
        let ise = |h: f64| {
            let est = pr_density(&sample, h, &k, &grid).unwrap();
            grid.iter()
                .zip(&est.values)
                .map(|(&x, v)| (v - std_normal_pdf(x)).powi(2) * 0.025)
                .sum::<f64>()
        };
        assert!(ise((n as f64).powf(-0.2)) < ise(1.0));
    }

    proptest! {
        #[test]
        fn linear_in_empirical_measure(
            a in prop::collection::vec(-3.0f64..3.0, 1..20),
            b in prop::collection::vec(-3.0f64..3.0, 1..20),
            x in -4.0f64..4.0,
        ) {
            let k = KernelSpec::gaussian();
            let h = 0.6;
            let mut both = a.clone();
            both.extend(&b);
            let na = a.len() as f64;
            let nb = b.len() as f64;
            let mixed = (na * pr_at(&a, h, &k, x) + nb * pr_at(&b, h, &k, x)) / (na + nb);
            prop_assert!((pr_at(&both, h, &k, x) - mixed).abs() < 1e-12);
        }
    }
}
