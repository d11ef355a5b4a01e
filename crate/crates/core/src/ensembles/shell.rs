use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};

use super::SymmetricMatrix;
use crate::error::{Error, Result};
use crate::seed::rng_from_seed;

/// Attempts allowed per sample in [`ShellMode::GaussianConditioned`].
pub const SHELL_REJECTION_BUDGET: u64 = 1_000_000;

/// The region `n(n+1)/8 - m_lower n <= sum_{i<=j} xi_ij^2 <= n(n+1)/8 + m_upper n`
/// in raw-entry coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellSpec {
    pub m_lower: f64,
    pub m_upper: f64,
}

impl ShellSpec {
    pub fn new(m_lower: f64, m_upper: f64) -> Self {
        ShellSpec { m_lower, m_upper }
    }

    pub fn symmetric(m: f64) -> Self {
        ShellSpec::new(m, m)
    }

    /// Bounds on `sum xi^2` for dimension `n`; errors if the shell is not
    /// valid there (non-positive widths or non-positive lower bound).
    pub fn bounds(&self, n: usize) -> Result<(f64, f64)> {
        if n == 0 {
            return Err(Error::Config("dimension n must be at least 1".into()));
        }
        if !(self.m_lower > 0.0 && self.m_upper > 0.0) {
            return Err(Error::Config(format!(
                "shell widths must be positive, got m_lower={} m_upper={}",
                self.m_lower, self.m_upper
            )));
        }
        let nf = n as f64;
        let center = nf * (nf + 1.0) / 8.0;
        let lo = center - self.m_lower * nf;
        let hi = center + self.m_upper * nf;
        if lo <= 0.0 {
            return Err(Error::Config(format!(
                "shell lower bound n(n+1)/8 - m_lower*n = {lo} is not positive for n={n}"
            )));
        }
        Ok((lo, hi))
    }

    /// Number of free coordinates, `n(n+1)/2`.
    pub fn dimension(n: usize) -> usize {
        n * (n + 1) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShellMode {
    /// Uniform with respect to Lebesgue measure on the shell.
    UniformVolume,
    /// i.i.d. `N(0, 1/4)` entries conditioned on landing in the shell.
    GaussianConditioned,
}

/// Outcome of one shell draw, with the number of attempts used.
#[derive(Debug, Clone)]
pub struct ShellSample {
    pub matrix: SymmetricMatrix,
    pub attempts: u64,
}

pub fn sample_shell(n: usize, shell: ShellSpec, mode: ShellMode, seed: u64) -> Result<SymmetricMatrix> {
    sample_shell_counted(n, shell, mode, seed).map(|s| s.matrix)
}

/// As [`sample_shell`], also reporting how many candidate points were drawn.
pub fn sample_shell_counted(
    n: usize,
    shell: ShellSpec,
    mode: ShellMode,
    seed: u64,
) -> Result<ShellSample> {
    let (lo, hi) = shell.bounds(n)?;
    let d = ShellSpec::dimension(n);
    let mut rng = rng_from_seed(seed);
    let scale = 1.0 / (n as f64).sqrt();
    let mut attempts = 0u64;
    loop {
        if attempts >= SHELL_REJECTION_BUDGET {
            return Err(Error::Sampling {
                message: format!("no point of the shell [{lo}, {hi}] hit in {attempts} attempts"),
                acceptance_rate: 0.0,
            });
        }
        attempts += 1;
        let mut raw: Vec<f64> = (0..d)
            .map(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                0.5 * z
            })
            .collect();
        if mode == ShellMode::UniformVolume {
            // radius with density r^(d-1) on [sqrt(lo), sqrt(hi)]:
            // r = r_hi * (rho + u (1 - rho))^(1/d), rho = (r_lo/r_hi)^d
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            let r_hi = hi.sqrt();
            let rho = (0.5 * d as f64 * (lo / hi).ln()).exp();
            let u: f64 = rng.random();
            let r = r_hi * (rho + u * (1.0 - rho)).powf(1.0 / d as f64);
            for x in raw.iter_mut() {
                *x *= r / norm;
            }
        }
        let s: f64 = raw.iter().map(|x| x * x).sum();
        // rounding can push a uniform-volume point a hair outside; redraw
        if s >= lo && s <= hi {
            return Ok(ShellSample {
                matrix: SymmetricMatrix::from_raw(n, raw, scale)?,
                attempts,
            });
        }
    }
}
