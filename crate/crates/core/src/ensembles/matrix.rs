use crate::error::{Error, Result};

/// A real symmetric matrix stored as its upper triangle of raw values
/// `xi_ij`, `i <= j`, packed row by row. Reads apply the scale factor, so
/// `get(i, j) == xi_ij * scale == get(j, i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    raw: Vec<f64>,
    scale: f64,
}

/// Offset of entry `(i, j)`, `i <= j`, in row-packed upper storage.
#[inline]
fn packed_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    /// Builds a matrix from packed upper-triangle raw values.
    pub fn from_raw(n: usize, raw: Vec<f64>, scale: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("matrix dimension must be at least 1".into()));
        }
        if raw.len() != n * (n + 1) / 2 {
            return Err(Error::Config(format!(
                "expected {} packed entries for n={n}, got {}",
                n * (n + 1) / 2,
                raw.len()
            )));
        }
        if !scale.is_finite() || raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numeric("non-finite matrix entry".into()));
        }
        Ok(SymmetricMatrix { n, raw, scale })
    }

    /// Builds a matrix with unit scale from a dense row-major array, reading
    /// only the upper triangle.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::Config(format!("expected {} dense entries", n * n)));
        }
        let mut raw = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            raw.extend_from_slice(&dense[i * n + i..(i + 1) * n]);
        }
        Self::from_raw(n, raw, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Packed upper-triangle raw values `xi_ij`, `i <= j`.
    pub fn raw(&self) -> &[f64] {
        &self.raw
    }

    pub fn raw_at(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.raw[packed_index(self.n, i, j)]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.raw_at(i, j) * self.scale
    }

    /// `sum_{i<=j} xi_ij^2`, each free entry counted once.
    pub fn raw_sum_of_squares(&self) -> f64 {
        self.raw.iter().map(|x| x * x).sum()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Squared Frobenius norm of the scaled matrix.
    pub fn frobenius_sq(&self) -> f64 {
        let mut diag = 0.0;
        let mut off = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let a = self.get(i, j);
                if i == j {
                    diag += a * a;
                } else {
                    off += a * a;
                }
            }
        }
        diag + 2.0 * off
    }

    /// Dense row-major copy of the scaled matrix.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                let a = self.raw[k] * self.scale;
                out[i * n + j] = a;
                out[j * n + i] = a;
                k += 1;
            }
        }
        out
    }

    /// `P A P^T` for the permutation taking index `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        if perm.len() != n {
            return Err(Error::Config("permutation length mismatch".into()));
        }
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dense[perm[i] * n + perm[j]] = self.raw_at(i, j);
            }
        }
        let mut m = Self::from_dense(n, &dense)?;
        m.scale = self.scale;
        Ok(m)
    }
}
