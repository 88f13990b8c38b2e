use serde::{Deserialize, Serialize};

use crate::lrd::std_normal_pdf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelName {
    Epanechnikov,
    Gaussian,
}

/// A symmetric probability kernel with its second moment `int s^2 K(s) ds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub name: KernelName,
    pub second_moment: f64,
}

impl KernelSpec {
    pub fn epanechnikov() -> Self {
        Self {
            name: KernelName::Epanechnikov,
            second_moment: 0.2,
        }
    }

    pub fn gaussian() -> Self {
        Self {
            name: KernelName::Gaussian,
            second_moment: 1.0,
        }
    }

    pub fn from_name(name: KernelName) -> Self {
        match name {
            KernelName::Epanechnikov => Self::epanechnikov(),
            KernelName::Gaussian => Self::gaussian(),
        }
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        match self.name {
            KernelName::Epanechnikov => {
                if u.abs() <= 1.0 {
                    0.75 * (1.0 - u * u)
                } else {
                    0.0
                }
            }
            KernelName::Gaussian => std_normal_pdf(u),
        }
    }

    /// Support radius, `None` for unbounded support.
    pub fn support(&self) -> Option<f64> {
        match self.name {
            KernelName::Epanechnikov => Some(1.0),
            KernelName::Gaussian => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self.name {
            KernelName::Epanechnikov => "epanechnikov",
            KernelName::Gaussian => "gaussian",
        }
    }
}

impl std::str::FromStr for KernelSpec {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "epanechnikov" | "epa" => Ok(Self::epanechnikov()),
            "gaussian" | "normal" => Ok(Self::gaussian()),
            other => Err(crate::Error::Config(format!("unknown kernel '{other}'"))),
        }
    }
}
