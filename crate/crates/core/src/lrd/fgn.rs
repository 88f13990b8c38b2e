//! Fractional Gaussian noise by circulant embedding.

use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::{check_alpha, ErrorPath, LrdSpec};
use crate::streams::RngStream;
use crate::{Error, Result};

/// Relative tolerance for negative embedding eigenvalues caused by rounding.
const EIGEN_TOL: f64 = 1e-10;

/// Unit-variance fGn autocovariance at lag `k`.
pub fn fgn_autocovariance(hurst: f64, k: usize) -> f64 {
    let two_h = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

/// Exact fGn sampler for a fixed length. The square-rooted circulant
/// eigenvalues are computed once.
pub struct FgnGenerator {
    n: usize,
    hurst: f64,
    sqrt_eig: Vec<f64>,
    min_eigenvalue: f64,
    fft: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for FgnGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FgnGenerator")
            .field("n", &self.n)
            .field("hurst", &self.hurst)
            .field("min_eigenvalue", &self.min_eigenvalue)
            .finish()
    }
}

impl FgnGenerator {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        check_alpha(alpha)?;
        Self::with_hurst(1.0 - alpha / 2.0, n)
    }

    /// Accepts any Hurst index in `(0, 1)`, including the white-noise case 1/2.
    pub fn with_hurst(hurst: f64, n: usize) -> Result<Self> {
        if !(hurst > 0.0 && hurst < 1.0) {
            return Err(Error::Config(format!(
                "Hurst index must lie in (0, 1), got {hurst}"
            )));
        }
        if n == 0 {
            return Ok(Self {
                n,
                hurst,
                sqrt_eig: Vec::new(),
                min_eigenvalue: 0.0,
                fft: None,
            });
        }
        // First row of the 2n circulant: g_0..g_n, g_{n-1}..g_1.
        let m = 2 * n;
        let mut row: Vec<Complex<f64>> = (0..=n)
            .map(|k| Complex::new(fgn_autocovariance(hurst, k), 0.0))
            .collect();
        row.extend(
            (1..n)
                .rev()
                .map(|k| Complex::new(fgn_autocovariance(hurst, k), 0.0)),
        );
        debug_assert_eq!(row.len(), m);

        let fft = FftPlanner::new().plan_fft_forward(m);
        fft.process(&mut row);
        let max_eig = row.iter().map(|c| c.re).fold(f64::MIN, f64::max);
        let (min_index, min_eigenvalue) =
            row.iter()
                .map(|c| c.re)
                .enumerate()
                .fold(
                    (0, f64::MAX),
                    |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
                );
        if min_eigenvalue < -EIGEN_TOL * max_eig {
            return Err(Error::NegativeEigenvalue {
                index: min_index,
                value: min_eigenvalue,
            });
        }
        let sqrt_eig = row
            .iter()
            .map(|c| (c.re.max(0.0) / m as f64).sqrt())
            .collect();
        Ok(Self {
            n,
            hurst,
            sqrt_eig,
            min_eigenvalue,
            fft: Some(fft),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Draws one path. With `w_j = sqrt(lambda_j / m) (a_j + i b_j)` the real
    /// part of `FFT(w)` has covariance equal to the circulant, whose leading
    /// `n x n` block is the fGn covariance.
    pub fn sample(&self, stream: &mut RngStream) -> Vec<f64> {
        let Some(fft) = &self.fft else {
            return Vec::new();
        };
        let mut w: Vec<Complex<f64>> = self
            .sqrt_eig
            .iter()
            .map(|&s| {
                let re = stream.next_normal();
                let im = stream.next_normal();
                Complex::new(s * re, s * im)
            })
            .collect();
        fft.process(&mut w);
        w[..self.n].iter().map(|c| c.re).collect()
    }
}

pub fn gen_fgn_path(alpha: f64, n: usize, stream: &mut RngStream) -> Result<ErrorPath> {
    let spec = LrdSpec::circulant_fgn(alpha)?;
    let values = FgnGenerator::new(alpha, n)?.sample(stream);
    Ok(ErrorPath {
        values,
        innovations: None,
        spec,
    })
}
