//! Values-only symmetric eigensolver.
//!
//! Dense input is reduced to tridiagonal form with Householder reflections
//! and the tridiagonal eigenvalues are found by implicit QL iteration with
//! Wilkinson shifts. A cofactor-expansion bisection solver for `n <= 4`
//! serves as an independent check.

mod charpoly;
mod householder;
mod ql;

pub use charpoly::charpoly_oracle;
pub use householder::tridiagonalize;
pub use ql::{tridiagonal_eigenvalues, MAX_QL_ITERATIONS};

use crate::ensembles::SymmetricMatrix;
use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Config("tridiagonal matrix needs at least one row".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Config(format!(
                "off-diagonal length {} inconsistent with dimension {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite tridiagonal entry".into()));
        }
        Ok(TridiagonalMatrix { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.diag.iter().map(|d| d * d).sum::<f64>()
            + 2.0 * self.offdiag.iter().map(|e| e * e).sum::<f64>()
    }
}

/// Eigenvalues of one matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Wraps values, sorting them ascending.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a spectrum needs at least one value".into()));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite eigenvalue".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Spectrum { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("spectra are never empty")
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// Keeps every second value. Used on spectra of the real embedding of a
    /// Hermitian matrix, where each eigenvalue appears twice.
    pub fn deduplicate_pairs(&self) -> Spectrum {
        Spectrum {
            values: self.values.iter().step_by(2).copied().collect(),
        }
    }

    /// Relative conservation residuals against a source with the given
    /// trace and squared Frobenius norm: `(|sum l - tr| / (n ||A||),
    /// |sum l^2 - ||A||^2| / (n ||A||^2))`.
    pub fn invariant_residuals(&self, trace: f64, frobenius_sq: f64) -> (f64, f64) {
        let n = self.values.len() as f64;
        let norm = frobenius_sq.sqrt().max(f64::MIN_POSITIVE);
        let s1: f64 = self.values.iter().sum();
        let s2: f64 = self.values.iter().map(|x| x * x).sum();
        (
            (s1 - trace).abs() / (n * norm),
            (s2 - frobenius_sq).abs() / (n * norm * norm),
        )
    }
}

/// Eigenvalues of a dense symmetric matrix.
pub fn eigenvalues(m: &SymmetricMatrix) -> Result<Spectrum> {
    let t = tridiagonalize(m)?;
    tridiagonal_eigenvalues(&t)
}
