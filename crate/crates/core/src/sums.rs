//! Polynomial forms of the innovations and their scalings.
//!
//! For a truncated moving average with scaled innovations `e_t = s z_t`,
//!
//! ```text
//! eps_{n,1} = sum_i eps_i
//! eps_{n,2} = sum_i sum_{1 <= j1 < j2 <= M} c_{j1} c_{j2} e_{i-j1} e_{i-j2}
//! ```
//!
//! The second form is evaluated through `xi_i = eps_i - e_i`: the inner double
//! sum equals `(xi_i^2 - sum_{j>=1} c_j^2 e_{i-j}^2) / 2`, and the diagonal
//! part is one more convolution.

use serde::{Deserialize, Serialize};

use crate::conv::{convolve_valid, ConvMethod};
use crate::lrd::{Backend, DistributionSpec, ErrorPath, LrdSpec};
use crate::{Error, Result};

/// Number of equispaced points in [`default_sup_grid`].
pub const SUP_GRID_POINTS: usize = 512;

pub fn eps_nr(path: &ErrorPath, r: u32) -> Result<f64> {
    match r {
        1 => Ok(path.values.iter().sum()),
        2 => eps_n2_with(path, ConvMethod::Auto),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// `eps_{n,2}` with an explicit convolution method for the diagonal term.
pub fn eps_n2_with(path: &ErrorPath, method: ConvMethod) -> Result<f64> {
    let z = path.innovations_or_err()?;
    let n = path.len();
    if n == 0 {
        return Ok(0.0);
    }
    let s = path.spec.innovation_sd();
    let s2 = s * s;
    let c = path.spec.coefficients()?;
    let m = path.spec.truncation_m();

    let mut diag_kernel: Vec<f64> = c.iter().map(|v| s2 * v * v).collect();
    diag_kernel[0] = 0.0;
    let z2: Vec<f64> = z.iter().map(|v| v * v).collect();
    let diag = convolve_valid(&diag_kernel, &z2, method);

    let total: f64 = path
        .values
        .iter()
        .zip(&z[m..])
        .zip(&diag)
        .map(|((eps, zi), d)| {
            let xi = eps - s * zi;
            xi * xi - d
        })
        .sum();
    Ok(0.5 * total)
}

/// `xi_i = eps_i - s z_i`, the part of each error not driven by its own
/// innovation.
pub fn xi_series(path: &ErrorPath) -> Result<Vec<f64>> {
    let eta = path.scaled_innovations()?;
    Ok(path.values.iter().zip(&eta).map(|(e, h)| e - h).collect())
}

/// Exact standard deviation of `eps_{n,1}`.
///
/// For the moving average, `sum_i eps_i = s * sum_t a_t z_t` where `a_t` is a
/// window sum of the coefficients, so the variance is `s^2 sum_t a_t^2`,
/// evaluated with prefix sums in `O(n + M)`. The fGn sum has variance
/// `n^{2H}` and the i.i.d. sum `n`.
pub fn sigma_n1_exact(spec: &LrdSpec, n: usize) -> Result<f64> {
    match spec.backend() {
        Backend::Iid => Ok((n as f64).sqrt()),
        Backend::CirculantFgn => {
            let h = spec.hurst().expect("fgn spec carries alpha");
            Ok((n as f64).powf(h))
        }
        Backend::TruncatedMa => {
            let c = spec.coefficients()?;
            let m = spec.truncation_m() as i64;
            let n = n as i64;
            // prefix[k] = c_0 + ... + c_{k-1}
            let mut prefix = Vec::with_capacity(c.len() + 1);
            prefix.push(0.0);
            let mut acc = 0.0;
            for v in &c {
                acc += v;
                prefix.push(acc);
            }
            let mut var = 0.0;
            for t in (1 - m)..=n {
                // lags k = i - t with 1 <= i <= n and 0 <= k <= M
                let lo = (1 - t).max(0);
                let hi = (n - t).min(m);
                if lo > hi {
                    continue;
                }
                let a = prefix[(hi + 1) as usize] - prefix[lo as usize];
                var += a * a;
            }
            let s = spec.innovation_sd();
            Ok(s * var.sqrt())
        }
    }
}

/// Asymptotic scaling `n^{(2 - r alpha)/2}` of `sigma_{n,r}`.
pub fn sigma_nr_asymptotic(alpha: f64, n: usize, r: u32) -> Result<f64> {
    crate::lrd::check_alpha(alpha)?;
    if !(r == 1 || r == 2) {
        return Err(Error::UnsupportedOrder(r));
    }
    if r as f64 * alpha >= 1.0 {
        return Err(Error::NotLongMemory { r, alpha });
    }
    Ok((n as f64).powf((2.0 - r as f64 * alpha) / 2.0))
}

/// Sample jump points are always added by [`reduction_diag`]; this grid adds
/// the smooth part: equispaced points over `[min - 1, max + 1]`.
pub fn default_sup_grid(sample: &[f64]) -> Vec<f64> {
    let (lo, hi) = sample
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let (lo, hi) = if lo.is_finite() {
        (lo - 1.0, hi + 1.0)
    } else {
        (-1.0, 1.0)
    };
    let step = (hi - lo) / (SUP_GRID_POINTS - 1) as f64;
    (0..SUP_GRID_POINTS).map(|i| lo + step * i as f64).collect()
}

/// `sup_x |S_{n,p}(x)|` where
/// `S_{n,p}(x) = sum_i (1{eps_i <= x} - F(x)) + sum_{r=1}^p (-1)^{r-1} F^{(r)}(x) eps_{n,r}`,
/// maximized over `grid` and over both one-sided limits at every jump point.
pub fn reduction_diag(
    path: &ErrorPath,
    dist: &DistributionSpec,
    p: u32,
    grid: &[f64],
) -> Result<f64> {
    if !(p == 1 || p == 2) {
        return Err(Error::UnsupportedOrder(p));
    }
    if grid.is_empty() || grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Config("grid must be nonempty and sorted".into()));
    }
    if path.is_empty() {
        return Ok(0.0);
    }
    let sums: Vec<f64> = (1..=p).map(|r| eps_nr(path, r)).collect::<Result<_>>()?;
    let n = path.len() as f64;
    let smooth = |x: f64| -> f64 {
        let mut v = -n * dist.cdf(x);
        for (r, e) in (1..=p).zip(&sums) {
            let sign = if r % 2 == 1 { 1.0 } else { -1.0 };
            v += sign * dist.cdf_derivative(r, x) * e;
        }
        v
    };

    let mut sorted = path.values.clone();
    sorted.sort_by(f64::total_cmp);

    let mut best = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        let v = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == v {
            j += 1;
        }
        let s = smooth(v);
        best = best.max((i as f64 + s).abs()).max((j as f64 + s).abs());
        i = j;
    }
    for &x in grid {
        let count = sorted.partition_point(|&v| v <= x) as f64;
        best = best.max((count + smooth(x)).abs());
    }
    Ok(best)
}

/// Dispersions of a statistic over a grid of sample sizes with the fitted
/// log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateStudyResult {
    pub n_grid: Vec<usize>,
    pub dispersions: Vec<f64>,
    pub slope: f64,
    pub slope_se: f64,
}

impl RateStudyResult {
    pub fn from_grid(n_grid: Vec<usize>, dispersions: Vec<f64>) -> Result<Self> {
        if n_grid.len() != dispersions.len() {
            return Err(Error::LengthMismatch {
                left: n_grid.len(),
                right: dispersions.len(),
            });
        }
        let pairs: Vec<(f64, f64)> = n_grid
            .iter()
            .zip(&dispersions)
            .map(|(&n, &d)| (n as f64, d))
            .collect();
        let (slope, slope_se) = rate_slope(&pairs)?;
        Ok(Self {
            n_grid,
            dispersions,
            slope,
            slope_se,
        })
    }
}

/// OLS slope of `ln(dispersion)` on `ln(n)` and its standard error.
pub fn rate_slope(study: &[(f64, f64)]) -> Result<(f64, f64)> {
    if study.len() < 3 {
        return Err(Error::TooFew {
            min: 3,
            got: study.len(),
        });
    }
    for &(n, d) in study {
        if n.is_nan() || n <= 0.0 {
            return Err(Error::NonPositiveValue(n));
        }
        if d.is_nan() || d <= 0.0 {
            return Err(Error::NonPositiveValue(d));
        }
    }
    let xs: Vec<f64> = study.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = study.iter().map(|(_, d)| d.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateDesign);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let se = (rss / (k - 2.0) / sxx).sqrt();
    Ok((slope, se))
}
