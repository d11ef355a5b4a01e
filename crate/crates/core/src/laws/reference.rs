use std::fmt;

use super::painleve::{default_solution, DEFAULT_T_MAX, DEFAULT_T_MIN};
use super::semicircle::semicircle_cdf;
use crate::error::Result;

/// `Phi(x)` via the complementary error function.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// A reference distribution function for goodness-of-fit tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceCdf {
    Semicircle,
    StdNormal,
    TracyWidom2,
}

impl ReferenceCdf {
    /// Prepares any lazily computed state (the Painlevé solution).
    pub fn prepare(&self) -> Result<()> {
        if *self == ReferenceCdf::TracyWidom2 {
            default_solution()?;
        }
        Ok(())
    }

    /// Evaluates the CDF. Tracy–Widom is clamped to 0 below `-10` and to 1
    /// above `8`, where it differs from those limits by less than `1e-30`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            ReferenceCdf::Semicircle => semicircle_cdf(x),
            ReferenceCdf::StdNormal => std_normal_cdf(x),
            ReferenceCdf::TracyWidom2 => {
                if x.is_nan() {
                    f64::NAN
                } else if x < DEFAULT_T_MIN {
                    0.0
                } else if x > DEFAULT_T_MAX {
                    1.0
                } else {
                    default_solution()?.tw2_cdf(x)?
                }
            }
        })
    }
}

impl fmt::Display for ReferenceCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReferenceCdf::Semicircle => "semicircle",
            ReferenceCdf::StdNormal => "std_normal",
            ReferenceCdf::TracyWidom2 => "tracy_widom_2",
        })
    }
}
