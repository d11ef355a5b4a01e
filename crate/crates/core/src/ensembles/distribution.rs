use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::error::{Error, Result};
use crate::seed::Rng;

/// Degrees of freedom below which heavy tails fall outside the polynomial
/// decay regime `P(|xi| >= x) <= x^-p`, `p >= 18`.
pub const TAIL_WARNING_THRESHOLD: f64 = 18.0;

/// Law of a raw entry `xi`. Every kind is symmetric with mean 0 and
/// variance exactly 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntryDistribution {
    Gaussian,
    /// `+1/2` or `-1/2` with equal probability.
    Rademacher,
    /// Uniform on `[-sqrt(3)/2, sqrt(3)/2]`.
    Uniform,
    /// Student t with `dof` degrees of freedom, rescaled by `sqrt((dof-2)/dof)/2`.
    StudentT { dof: f64 },
}

const UNIFORM_HALF_WIDTH: f64 = 0.866_025_403_784_438_6; // sqrt(3)/2

impl EntryDistribution {
    pub fn student_t(dof: f64) -> Result<Self> {
        let d = EntryDistribution::StudentT { dof };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if let EntryDistribution::StudentT { dof } = *self {
            if !(dof.is_finite() && dof > 2.0) {
                return Err(Error::Config(format!(
                    "student_t requires tail_exponent > 2 for finite variance, got {dof}"
                )));
            }
        }
        Ok(())
    }

    /// Non-fatal remarks about the law (currently only heavy tails).
    pub fn warnings(&self) -> Vec<String> {
        match *self {
            EntryDistribution::StudentT { dof } if dof < TAIL_WARNING_THRESHOLD => vec![format!(
                "student_t:{dof} has tail exponent below {TAIL_WARNING_THRESHOLD}; edge results are not covered"
            )],
            _ => Vec::new(),
        }
    }

    pub fn variance(&self) -> f64 {
        0.25
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        match *self {
            EntryDistribution::Gaussian => {
                let z: f64 = StandardNormal.sample(rng);
                0.5 * z
            }
            EntryDistribution::Rademacher => {
                if rng.random::<bool>() {
                    0.5
                } else {
                    -0.5
                }
            }
            EntryDistribution::Uniform => {
                rng.random_range(-UNIFORM_HALF_WIDTH..=UNIFORM_HALF_WIDTH)
            }
            EntryDistribution::StudentT { dof } => {
                // validated at construction; StudentT::new only rejects dof <= 0
                let t: f64 = StudentT::new(dof).expect("dof > 2").sample(rng);
                t * ((dof - 2.0) / dof).sqrt() * 0.5
            }
        }
    }

    /// `f(x) = -ln g(x)` for laws with a Lebesgue density; `None` for the
    /// atomic Rademacher law.
    pub fn neg_log_density(&self, x: f64) -> Option<f64> {
        use std::f64::consts::PI;
        match *self {
            // N(0, 1/4): g(x) = sqrt(2/pi) exp(-2x^2)
            EntryDistribution::Gaussian => Some(2.0 * x * x - 0.5 * (2.0 / PI).ln()),
            EntryDistribution::Rademacher => None,
            EntryDistribution::Uniform => {
                if x.abs() <= UNIFORM_HALF_WIDTH {
                    Some((2.0 * UNIFORM_HALF_WIDTH).ln())
                } else {
                    Some(f64::INFINITY)
                }
            }
            EntryDistribution::StudentT { dof } => {
                let s = ((dof - 2.0) / dof).sqrt() * 0.5;
                let t = x / s;
                let ln_norm = statrs::function::gamma::ln_gamma((dof + 1.0) / 2.0)
                    - statrs::function::gamma::ln_gamma(dof / 2.0)
                    - 0.5 * (dof * PI).ln();
                Some(-(ln_norm - (dof + 1.0) / 2.0 * (1.0 + t * t / dof).ln()) + s.ln())
            }
        }
    }
}

impl fmt::Display for EntryDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryDistribution::Gaussian => write!(f, "gaussian"),
            EntryDistribution::Rademacher => write!(f, "rademacher"),
            EntryDistribution::Uniform => write!(f, "uniform"),
            EntryDistribution::StudentT { dof } => write!(f, "student_t:{dof}"),
        }
    }
}

/// Which ensemble to draw spectra from, as written on the command line:
/// `gaussian | goe | gue | rademacher | uniform | student_t:<dof> | tridiag:<beta>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnsembleSpec {
    Wigner(EntryDistribution),
    Goe,
    /// Dense real embedding of GUE; spectra are deduplicated to `n` values.
    Gue,
    Tridiagonal { beta: u8 },
}

impl EnsembleSpec {
    /// Dyson index of the ensemble's universality class.
    pub fn beta(&self) -> u8 {
        match self {
            EnsembleSpec::Gue => 2,
            EnsembleSpec::Tridiagonal { beta } => *beta,
            _ => 1,
        }
    }

    pub fn warnings(&self) -> Vec<String> {
        match self {
            EnsembleSpec::Wigner(d) => d.warnings(),
            _ => Vec::new(),
        }
    }
}

impl FromStr for EnsembleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let no_arg = |spec: EnsembleSpec| match arg {
            None => Ok(spec),
            Some(_) => Err(Error::Config(format!("'{head}' takes no argument in '{s}'"))),
        };
        match head {
            "gaussian" => no_arg(EnsembleSpec::Wigner(EntryDistribution::Gaussian)),
            "rademacher" => no_arg(EnsembleSpec::Wigner(EntryDistribution::Rademacher)),
            "uniform" => no_arg(EnsembleSpec::Wigner(EntryDistribution::Uniform)),
            "goe" => no_arg(EnsembleSpec::Goe),
            "gue" => no_arg(EnsembleSpec::Gue),
            "student_t" => {
                let dof: f64 = arg
                    .ok_or_else(|| Error::Config("student_t needs ':<dof>'".into()))?
                    .parse()
                    .map_err(|_| Error::Config(format!("bad degrees of freedom in '{s}'")))?;
                Ok(EnsembleSpec::Wigner(EntryDistribution::student_t(dof)?))
            }
            "tridiag" => {
                let beta: u8 = arg
                    .ok_or_else(|| Error::Config("tridiag needs ':<beta>'".into()))?
                    .parse()
                    .map_err(|_| Error::Config(format!("bad beta in '{s}'")))?;
                if beta != 1 && beta != 2 {
                    return Err(Error::Config(format!("unsupported beta {beta}; use 1 or 2")));
                }
                Ok(EnsembleSpec::Tridiagonal { beta })
            }
            _ => Err(Error::Config(format!("unknown distribution spec '{s}'"))),
        }
    }
}

impl fmt::Display for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnsembleSpec::Wigner(d) => write!(f, "{d}"),
            EnsembleSpec::Goe => write!(f, "goe"),
            EnsembleSpec::Gue => write!(f, "gue"),
            EnsembleSpec::Tridiagonal { beta } => write!(f, "tridiag:{beta}"),
        }
    }
}
