//! The Gaussian scale family `F(x; theta) = Phi(x / theta)`.

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

pub fn std_normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// A centered Gaussian law with scale (standard deviation) `theta`,
/// together with its density and the density's first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    theta: f64,
}

pub fn gaussian_family(theta: f64) -> Result<DistributionSpec> {
    DistributionSpec::gaussian(theta)
}

impl DistributionSpec {
    pub fn gaussian(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::NonPositive {
                name: "theta",
                value: theta,
            });
        }
        Ok(Self { theta })
    }

    pub fn standard() -> Self {
        Self { theta: 1.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn cdf(&self, x: f64) -> f64 {
        std_normal_cdf(x / self.theta)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        std_normal_pdf(x / self.theta) / self.theta
    }

    pub fn pdf_d1(&self, x: f64) -> f64 {
        let z = x / self.theta;
        -z * std_normal_pdf(z) / (self.theta * self.theta)
    }

    pub fn pdf_d2(&self, x: f64) -> f64 {
        let z = x / self.theta;
        (z * z - 1.0) * std_normal_pdf(z) / self.theta.powi(3)
    }

    /// `F^{(r)}(x)` for `r` in `0..=3`.
    pub fn cdf_derivative(&self, r: u32, x: f64) -> f64 {
        match r {
            0 => self.cdf(x),
            1 => self.pdf(x),
            2 => self.pdf_d1(x),
            3 => self.pdf_d2(x),
            _ => panic!("derivative order {r} not provided"),
        }
    }
}
