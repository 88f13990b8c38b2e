//! Nadaraya-Watson regression.

use rayon::prelude::*;

use super::{check_xy, FitKind, KernelSpec, RegressionFit};
use crate::lrd::DistributionSpec;
use crate::{Error, Result};

/// Predictors sorted once, so bounded kernels only visit their window.
struct SortedDesign<'a> {
    xs: Vec<f64>,
    ys: Vec<f64>,
    kernel: &'a KernelSpec,
    b: f64,
}

impl<'a> SortedDesign<'a> {
    fn new(x: &[f64], y: &[f64], b: f64, kernel: &'a KernelSpec) -> Self {
        let mut idx: Vec<usize> = (0..x.len()).collect();
        idx.sort_by(|&i, &j| x[i].total_cmp(&x[j]));
        Self {
            xs: idx.iter().map(|&i| x[i]).collect(),
            ys: idx.iter().map(|&i| y[i]).collect(),
            kernel,
            b,
        }
    }

    /// `(sum_j Y_j K_b(at - X_j), sum_j K_b(at - X_j))`
    fn sums(&self, at: f64) -> (f64, f64) {
        let (lo, hi) = match self.kernel.support() {
            Some(r) => {
                let w = r * self.b;
                (
                    self.xs.partition_point(|&v| v < at - w),
                    self.xs.partition_point(|&v| v <= at + w),
                )
            }
            None => (0, self.xs.len()),
        };
        let mut num = 0.0;
        let mut den = 0.0;
        for j in lo..hi {
            let k = self.kernel.eval((at - self.xs[j]) / self.b);
            num += self.ys[j] * k;
            den += k;
        }
        (num, den)
    }
}

fn check_bandwidth(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive {
            name: "bandwidth",
            value: b,
        })
    }
}

/// Fits `m_hat_b(X_i) = sum_j Y_j K_b(X_i - X_j) / sum_j K_b(X_i - X_j)` at
/// every design point, with `K_b(u) = K(u / b)`.
pub fn nw_fit(x: &[f64], y: &[f64], b: f64, kernel: &KernelSpec) -> Result<RegressionFit> {
    check_xy(x, y)?;
    check_bandwidth(b)?;
    let design = SortedDesign::new(x, y, b, kernel);
    let nb = x.len() as f64 * b;
    let sums: Vec<(f64, f64)> = x.par_iter().map(|&xi| design.sums(xi)).collect();

    let mut fitted = Vec::with_capacity(x.len());
    let mut residuals = Vec::with_capacity(x.len());
    let mut density = Vec::with_capacity(x.len());
    let mut excluded = Vec::new();
    for (i, ((num, den), yi)) in sums.into_iter().zip(y).enumerate() {
        density.push(den / nb);
        if den > 0.0 {
            let m = num / den;
            fitted.push(m);
            residuals.push(yi - m);
        } else {
            excluded.push(i);
            fitted.push(f64::NAN);
            residuals.push(f64::NAN);
        }
    }
    Ok(RegressionFit {
        kind: FitKind::NadarayaWatson {
            bandwidth: b,
            kernel: *kernel,
            density,
            excluded,
        },
        fitted,
        residuals,
    })
}

/// Evaluates the estimator at arbitrary points; `None` where the kernel window
/// is empty.
pub fn nw_predict(
    x: &[f64],
    y: &[f64],
    b: f64,
    kernel: &KernelSpec,
    at: &[f64],
) -> Result<Vec<Option<f64>>> {
    check_xy(x, y)?;
    check_bandwidth(b)?;
    let design = SortedDesign::new(x, y, b, kernel);
    Ok(at
        .iter()
        .map(|&p| {
            let (num, den) = design.sums(p);
            (den > 0.0).then(|| num / den)
        })
        .collect())
}

/// `C n^{-1/5}`.
pub fn bandwidth_default(n: usize, c: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFew { min: 2, got: n });
    }
    if c.is_nan() || c <= 0.0 {
        return Err(Error::NonPositive {
            name: "C",
            value: c,
        });
    }
    Ok(c * (n as f64).powf(-0.2))
}

/// Which bandwidth conditions the rule `b = C n^{-1/5}` meets for a given
/// memory parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandwidthValidity {
    /// `b sigma_{n,1}^2 / n -> infinity`
    pub undersmoothing: bool,
    /// Rate conditions for `alpha < 1/2`.
    pub short_range_terms: bool,
    /// Rate conditions for `alpha > 1/2`.
    pub weak_terms: bool,
}

pub fn bandwidth_validity(alpha: f64) -> BandwidthValidity {
    let under = alpha < 0.8;
    BandwidthValidity {
        undersmoothing: under,
        short_range_terms: alpha < 0.5 && under,
        weak_terms: alpha > 0.5 && under,
    }
}

/// A real function with two derivatives.
pub trait Smooth {
    fn value(&self, x: f64) -> f64;
    fn d1(&self, x: f64) -> f64;
    fn d2(&self, x: f64) -> f64;
}

impl<F, G, H> Smooth for (F, G, H)
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
    fn d1(&self, x: f64) -> f64 {
        (self.1)(x)
    }
    fn d2(&self, x: f64) -> f64 {
        (self.2)(x)
    }
}

/// The density of a [`DistributionSpec`] as a smooth function.
impl Smooth for DistributionSpec {
    fn value(&self, x: f64) -> f64 {
        self.pdf(x)
    }
    fn d1(&self, x: f64) -> f64 {
        self.pdf_d1(x)
    }
    fn d2(&self, x: f64) -> f64 {
        self.pdf_d2(x)
    }
}

/// Leading bias `(b^2 kappa_2 / 2) rho(y) / f(y)` with
/// `rho = (m f)'' - m f'' = m'' f + 2 m' f'`.
pub fn nw_bias_theory(
    m: &impl Smooth,
    f: &impl Smooth,
    b: f64,
    kernel: &KernelSpec,
    y: f64,
) -> Result<f64> {
    let fy = f.value(y);
    if fy.is_nan() || fy <= 0.0 {
        return Err(Error::ZeroDensity(y));
    }
    let rho = m.d2(y) * fy + 2.0 * m.d1(y) * f.d1(y);
    Ok(0.5 * b * b * kernel.second_moment * rho / fy)
}
