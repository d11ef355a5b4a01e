//! Random matrix samplers.
//!
//! Wigner matrices are stored as raw entries `xi_ij` with the `1/sqrt(n)`
//! factored out, so that `a_ij = xi_ij / sqrt(n)` and the spectrum fills
//! `[-1, 1]` when `Var(xi) = 1/4`.

mod distribution;
mod matrix;
mod shell;

pub use distribution::{EnsembleSpec, EntryDistribution, TAIL_WARNING_THRESHOLD};
pub use matrix::SymmetricMatrix;
pub use shell::{
    sample_shell, sample_shell_counted, ShellMode, ShellSample, ShellSpec, SHELL_REJECTION_BUDGET,
};

use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::seed::{rng_from_seed, Rng};
use crate::spectra::TridiagonalMatrix;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Config("dimension n must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn normal(rng: &mut Rng, sd: f64) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    sd * z
}

/// Wigner matrix with all `n(n+1)/2` free entries drawn i.i.d. from `dist`.
pub fn sample_wigner(n: usize, dist: EntryDistribution, seed: u64) -> Result<SymmetricMatrix> {
    check_dim(n)?;
    dist.validate()?;
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..n * (n + 1) / 2).map(|_| dist.sample(&mut rng)).collect();
    SymmetricMatrix::from_raw(n, raw, 1.0 / (n as f64).sqrt())
}

/// GOE: `a_ij ~ N(0, 1/(4n))` off the diagonal, `a_ii ~ N(0, 1/(2n))`.
pub fn sample_goe(n: usize, seed: u64) -> Result<SymmetricMatrix> {
    check_dim(n)?;
    let mut rng = rng_from_seed(seed);
    let diag_sd = 0.5f64.sqrt();
    let mut raw = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        raw.push(normal(&mut rng, diag_sd));
        for _ in i + 1..n {
            raw.push(normal(&mut rng, 0.5));
        }
    }
    SymmetricMatrix::from_raw(n, raw, 1.0 / (n as f64).sqrt())
}

/// GUE matrix `H = X + iY` (`Re a_ij, Im a_ij ~ N(0, 1/(8n))`,
/// `a_ii ~ N(0, 1/(4n))`) returned through its real symmetric embedding
/// `[[X, -Y], [Y, X]]` of dimension `2n`. Every eigenvalue of `H` appears
/// twice in the embedding's spectrum.
pub fn sample_gue_embedded(n: usize, seed: u64) -> Result<SymmetricMatrix> {
    check_dim(n)?;
    let mut rng = rng_from_seed(seed);
    let off_sd = (1.0f64 / 8.0).sqrt();
    let mut x = vec![0.0; n * n];
    let mut y = vec![0.0; n * n];
    for i in 0..n {
        x[i * n + i] = normal(&mut rng, 0.5);
        for j in i + 1..n {
            let re = normal(&mut rng, off_sd);
            let im = normal(&mut rng, off_sd);
            x[i * n + j] = re;
            x[j * n + i] = re;
            y[i * n + j] = im;
            y[j * n + i] = -im;
        }
    }
    let m = 2 * n;
    let mut dense = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            dense[i * m + j] = x[i * n + j];
            dense[(n + i) * m + n + j] = x[i * n + j];
            dense[i * m + n + j] = -y[i * n + j];
            dense[(n + i) * m + j] = y[i * n + j];
        }
    }
    let mut raw = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        raw.extend_from_slice(&dense[i * m + i..(i + 1) * m]);
    }
    SymmetricMatrix::from_raw(m, raw, 1.0 / (n as f64).sqrt())
}

/// Tridiagonal beta-ensemble model whose eigenvalue law equals GOE
/// (`beta = 1`) or GUE (`beta = 2`) at the `exp(-beta n sum lambda^2)`
/// normalization: diagonal `N(0, 1)`, off-diagonal `chi_{beta(n-i)} / sqrt 2`,
/// all divided by `sqrt(2 beta n)`.
pub fn sample_beta_tridiagonal(n: usize, beta: u8, seed: u64) -> Result<TridiagonalMatrix> {
    check_dim(n)?;
    if beta != 1 && beta != 2 {
        return Err(Error::Config(format!("unsupported beta {beta}; use 1 or 2")));
    }
    let b = beta as f64;
    let scale = 1.0 / (2.0 * b * n as f64).sqrt();
    let mut rng = rng_from_seed(seed);
    let diag: Vec<f64> = (0..n).map(|_| normal(&mut rng, scale)).collect();
    let offdiag: Vec<f64> = (1..n)
        .map(|i| {
            let chi2 = ChiSquared::new(b * (n - i) as f64).expect("positive dof");
            let v: f64 = chi2.sample(&mut rng);
            v.sqrt() * std::f64::consts::FRAC_1_SQRT_2 * scale
        })
        .collect();
    TridiagonalMatrix::new(diag, offdiag)
}
