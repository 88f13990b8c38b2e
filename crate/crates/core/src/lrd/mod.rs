//! Long-memory error generators.
//!
//! Two exact-in-law constructions are provided:
//!
//! - a truncated causal moving average `eps_i = s * sum_{k=0}^{M} c_k z_{i-k}`
//!   with `c_0 = 1`, `c_k = k^{-(alpha+1)/2}` and `s` chosen so that
//!   `Var(eps_i) = 1`. The innovations `z` are kept, which makes the second
//!   order form `eps_{n,2}` and `xi_i = eps_i - s z_i` computable;
//! - fractional Gaussian noise with Hurst index `H = 1 - alpha/2`, sampled
//!   exactly by circulant embedding.
//!
//! The slowly varying factor in the coefficient decay is taken to be 1.

mod family;
mod fgn;

use serde::{Deserialize, Serialize};

use crate::conv::{convolve_valid, convolve_valid_direct, ConvMethod, FftConvolver};
use crate::streams::RngStream;
use crate::{Error, Result};

pub use family::{gaussian_family, std_normal_cdf, std_normal_pdf, DistributionSpec};
pub use fgn::{fgn_autocovariance, gen_fgn_path, FgnGenerator};

/// Smallest truncation used by [`LrdSpec::default_truncation`].
pub const MIN_DEFAULT_TRUNCATION: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    TruncatedMa,
    CirculantFgn,
    Iid,
}

impl Backend {
    pub fn as_str(&self) -> &'static str {
        match self {
            Backend::TruncatedMa => "ma",
            Backend::CirculantFgn => "fgn",
            Backend::Iid => "iid",
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ma" | "truncated-ma" | "truncated_ma" => Ok(Backend::TruncatedMa),
            "fgn" | "circulant-fgn" | "circulant_fgn" => Ok(Backend::CirculantFgn),
            "iid" => Ok(Backend::Iid),
            other => Err(Error::Config(format!("unknown backend '{other}'"))),
        }
    }
}

/// Full description of an error generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrdSpec {
    alpha: Option<f64>,
    backend: Backend,
    truncation_m: usize,
    innovation_sd: f64,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

impl LrdSpec {
    /// Truncated moving average with lags `0..=m`. `m = 0` degenerates to
    /// i.i.d. standard normal errors (with innovations retained).
    pub fn truncated_ma(alpha: f64, m: usize) -> Result<Self> {
        let (_, innovation_sd) = ma_coefficients(alpha, m)?;
        Ok(Self {
            alpha: Some(alpha),
            backend: Backend::TruncatedMa,
            truncation_m: m,
            innovation_sd,
        })
    }

    pub fn circulant_fgn(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha: Some(alpha),
            backend: Backend::CirculantFgn,
            truncation_m: 0,
            innovation_sd: 1.0,
        })
    }

    pub fn iid() -> Self {
        Self {
            alpha: None,
            backend: Backend::Iid,
            truncation_m: 0,
            innovation_sd: 1.0,
        }
    }

    /// Builds a spec for `backend`, using [`LrdSpec::default_truncation`] when
    /// `truncation` is `None`.
    pub fn for_backend(
        backend: Backend,
        alpha: Option<f64>,
        n: usize,
        truncation: Option<usize>,
    ) -> Result<Self> {
        let need_alpha =
            || alpha.ok_or_else(|| Error::Config(format!("backend {backend} needs alpha")));
        match backend {
            Backend::Iid => Ok(Self::iid()),
            Backend::CirculantFgn => Self::circulant_fgn(need_alpha()?),
            Backend::TruncatedMa => Self::truncated_ma(
                need_alpha()?,
                truncation.unwrap_or_else(|| Self::default_truncation(n)),
            ),
        }
    }

    pub fn default_truncation(n: usize) -> usize {
        (10 * n).max(MIN_DEFAULT_TRUNCATION)
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn truncation_m(&self) -> usize {
        self.truncation_m
    }

    /// `s` such that `s^2 * sum c_k^2 = 1`; 1 for the other backends.
    pub fn innovation_sd(&self) -> f64 {
        self.innovation_sd
    }

    pub fn hurst(&self) -> Option<f64> {
        self.alpha.map(|a| 1.0 - a / 2.0)
    }

    /// The unscaled coefficients `c_0..=c_M`.
    pub fn coefficients(&self) -> Result<Vec<f64>> {
        match (self.backend, self.alpha) {
            (Backend::TruncatedMa, Some(alpha)) => Ok(ma_coefficients(alpha, self.truncation_m)?.0),
            _ => Err(Error::RequiresMovingAverage),
        }
    }
}

/// Coefficients `c_0 = 1`, `c_k = k^{-(alpha+1)/2}` for `1 <= k <= m`, and the
/// innovation scale `(sum c_k^2)^{-1/2}`.
pub fn ma_coefficients(alpha: f64, m: usize) -> Result<(Vec<f64>, f64)> {
    check_alpha(alpha)?;
    let exponent = -(alpha + 1.0) / 2.0;
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(1.0);
    coeffs.extend((1..=m).map(|k| (k as f64).powf(exponent)));
    // Sum small terms first.
    let sum_sq: f64 = coeffs.iter().rev().map(|c| c * c).sum();
    Ok((coeffs, sum_sq.sqrt().recip()))
}

/// Exact autocovariances `gamma(h) = s^2 sum_{k} c_k c_{k+h}` for `h = 0..=max_lag`.
pub fn ma_autocovariance(spec: &LrdSpec, max_lag: usize) -> Result<Vec<f64>> {
    let c = spec.coefficients()?;
    let s2 = spec.innovation_sd * spec.innovation_sd;
    Ok((0..=max_lag)
        .map(|h| {
            if h >= c.len() {
                0.0
            } else {
                s2 * c[..c.len() - h]
                    .iter()
                    .zip(&c[h..])
                    .rev()
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            }
        })
        .collect())
}

/// A realized error sequence.
///
/// For the moving-average backend `innovations` holds the standard normal
/// draws `z_{1-M}, ..., z_n` (length `n + M`), and
/// `values[i-1] = s * sum_{k=0}^{M} c_k z_{i-k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorPath {
    pub values: Vec<f64>,
    pub innovations: Option<Vec<f64>>,
    pub spec: LrdSpec,
}

impl ErrorPath {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The innovations as they enter the errors, `s * z_i`, for `i = 1..=n`.
    pub fn scaled_innovations(&self) -> Result<Vec<f64>> {
        let z = self.innovations_or_err()?;
        let m = self.spec.truncation_m;
        let s = self.spec.innovation_sd;
        Ok(z[m..].iter().map(|v| s * v).collect())
    }

    pub(crate) fn innovations_or_err(&self) -> Result<&[f64]> {
        self.innovations
            .as_deref()
            .ok_or(Error::MissingInnovations(self.spec.backend.as_str()))
    }

    /// Recomputes the values from the stored innovations by direct summation.
    pub fn reconstruct_values(&self) -> Result<Vec<f64>> {
        let z = self.innovations_or_err()?;
        let s = self.spec.innovation_sd;
        let c: Vec<f64> = self.spec.coefficients()?.iter().map(|c| s * c).collect();
        Ok(convolve_valid_direct(&c, z))
    }
}

/// Moving-average path generator with the coefficient spectrum prepared once
/// for a fixed `n`.
#[derive(Debug)]
pub struct MaGenerator {
    spec: LrdSpec,
    n: usize,
    kernel: Vec<f64>,
    convolver: Option<FftConvolver>,
}

impl MaGenerator {
    pub fn new(spec: &LrdSpec, n: usize) -> Result<Self> {
        Self::with_method(spec, n, ConvMethod::Auto)
    }

    pub fn with_method(spec: &LrdSpec, n: usize, method: ConvMethod) -> Result<Self> {
        let s = spec.innovation_sd;
        let kernel: Vec<f64> = spec.coefficients()?.iter().map(|c| s * c).collect();
        let work = kernel.len().saturating_mul(n);
        let use_fft = n > 0
            && match method {
                ConvMethod::Fft => true,
                ConvMethod::Direct => false,
                ConvMethod::Auto => work > 1 << 15,
            };
        let convolver = use_fft.then(|| FftConvolver::new(&kernel, n + kernel.len() - 1));
        Ok(Self {
            spec: spec.clone(),
            n,
            kernel,
            convolver,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sample(&self, stream: &mut RngStream) -> ErrorPath {
        let len = self.n + self.spec.truncation_m;
        let mut z = vec![0.0; len];
        stream.fill_normal(&mut z);
        self.from_innovations(z)
    }

    /// Builds the path from given standard-normal innovations of length `n + M`.
    pub fn from_innovations(&self, innovations: Vec<f64>) -> ErrorPath {
        assert_eq!(innovations.len(), self.n + self.spec.truncation_m);
        let values = if self.n == 0 {
            Vec::new()
        } else {
            match &self.convolver {
                Some(conv) => conv.valid(&innovations),
                None => convolve_valid(&self.kernel, &innovations, ConvMethod::Direct),
            }
        };
        ErrorPath {
            values,
            innovations: Some(innovations),
            spec: self.spec.clone(),
        }
    }
}

pub fn gen_ma_path(spec: &LrdSpec, n: usize, stream: &mut RngStream) -> Result<ErrorPath> {
    if spec.backend != Backend::TruncatedMa {
        return Err(Error::RequiresMovingAverage);
    }
    Ok(MaGenerator::new(spec, n)?.sample(stream))
}

pub fn gen_iid_path(n: usize, stream: &mut RngStream) -> ErrorPath {
    ErrorPath {
        values: crate::streams::sample_std_normal(stream, n),
        innovations: None,
        spec: LrdSpec::iid(),
    }
}

/// A reusable generator for any backend at a fixed path length.
#[derive(Debug)]
pub enum PathGenerator {
    Ma(MaGenerator),
    Fgn(FgnGenerator, LrdSpec),
    Iid,
}

impl PathGenerator {
    pub fn new(spec: &LrdSpec, n: usize) -> Result<Self> {
        Ok(match spec.backend {
            Backend::TruncatedMa => PathGenerator::Ma(MaGenerator::new(spec, n)?),
            Backend::CirculantFgn => {
                let alpha = spec.alpha.ok_or(Error::AlphaOutOfRange(f64::NAN))?;
                PathGenerator::Fgn(FgnGenerator::new(alpha, n)?, spec.clone())
            }
            Backend::Iid => PathGenerator::Iid,
        })
    }

    pub fn sample(&self, n: usize, stream: &mut RngStream) -> ErrorPath {
        match self {
            PathGenerator::Ma(g) => g.sample(stream),
            PathGenerator::Fgn(g, spec) => ErrorPath {
                values: g.sample(stream),
                innovations: None,
                spec: spec.clone(),
            },
            PathGenerator::Iid => gen_iid_path(n, stream),
        }
    }
}

/// Generates one path of length `n` for any backend.
pub fn gen_path(spec: &LrdSpec, n: usize, stream: &mut RngStream) -> Result<ErrorPath> {
    Ok(PathGenerator::new(spec, n)?.sample(n, stream))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::streams::{make_stream, StreamKey};
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficients_small_case() {
        let (c, _) = ma_coefficients(0.4, 3).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c[0], 1.0);
        assert_eq!(c[1], 1.0);
        assert_abs_diff_eq!(c[2], 0.615_572_206_672_458_5, epsilon = 1e-12);
        assert_abs_diff_eq!(c[3], 0.463_463_056_771_969_8, epsilon = 1e-12);
    }

    #[test]
    fn innovation_sd_oracle() {
        // Independent recomputation of (1 + 1 + 2^-1.4 + 3^-1.4 + 4^-1.4)^(-1/2).
        let sum = 1.0 + 1.0 + 2f64.powf(-1.4) + 3f64.powf(-1.4) + 4f64.powf(-1.4);
        let expected = 1.0 / sum.sqrt();
        let (_, s) = ma_coefficients(0.4, 4).unwrap();
        assert_abs_diff_eq!(s, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(s, 0.60442, epsilon = 5e-6);
    }

    #[test]
    fn leading_coefficient_is_one() {
        for alpha in [0.05, 0.3, 0.5, 0.95] {
            assert_eq!(ma_coefficients(alpha, 10).unwrap().0[0], 1.0);
        }
    }

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        for alpha in [0.0, 1.0, -0.2, 1.2, f64::NAN] {
            assert!(matches!(
                ma_coefficients(alpha, 5),
                Err(Error::AlphaOutOfRange(_))
            ));
        }
    }

    #[test]
    fn unit_variance_normalization() {
        for (alpha, m) in [(0.2, 100), (0.7, 20_000), (0.4, 1)] {
            let spec = LrdSpec::truncated_ma(alpha, m).unwrap();
            let g = ma_autocovariance(&spec, 0).unwrap();
            assert!((g[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_innovations_give_zero_path() {
        let spec = LrdSpec::truncated_ma(0.3, 50).unwrap();
        let gen = MaGenerator::new(&spec, 20).unwrap();
        let path = gen.from_innovations(vec![0.0; 70]);
        assert!(path.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn reconstruction_fft_path() {
        let spec = LrdSpec::truncated_ma(0.25, 3000).unwrap();
        let gen = MaGenerator::with_method(&spec, 500, ConvMethod::Fft).unwrap();
        let path = gen.sample(&mut make_stream(StreamKey::new(5, 5)));
        let direct = path.reconstruct_values().unwrap();
        for (a, b) in path.values.iter().zip(&direct) {
            assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn other_backends_have_no_innovations() {
        let mut s = make_stream(StreamKey::new(1, 2));
        let p = gen_path(&LrdSpec::circulant_fgn(0.4).unwrap(), 16, &mut s).unwrap();
        assert!(p.innovations.is_none());
        assert!(p.reconstruct_values().is_err());
        let p = gen_iid_path(4, &mut s);
        assert!(matches!(
            p.scaled_innovations(),
            Err(Error::MissingInnovations("iid"))
        ));
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("ma".parse::<Backend>().unwrap(), Backend::TruncatedMa);
        assert_eq!("FGN".parse::<Backend>().unwrap(), Backend::CirculantFgn);
        assert!("arfima".parse::<Backend>().is_err());
    }

    #[test]
    fn default_truncation_floor() {
        assert_eq!(LrdSpec::default_truncation(100), 10_000);
        assert_eq!(LrdSpec::default_truncation(4096), 40_960);
    }
}
