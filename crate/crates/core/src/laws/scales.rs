//! Bulk and near-edge fluctuation scales for individual GUE eigenvalues,
//! converted from the `sqrt(2n)`-edge convention to the `[-1, 1]` support.

use std::f64::consts::PI;

use super::semicircle::classical_location;
use crate::error::{Error, Result};

/// Largest `|G^{-1}(k/n)|` still treated as bulk.
pub const BULK_LIMIT: f64 = 0.99;

/// Standard deviation of the `k`-th eigenvalue in the bulk:
/// `sqrt(ln n / (8 n^2 (1 - t^2)))` with `t = G^{-1}(k/n)`.
pub fn bulk_sigma(k: usize, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("bulk_sigma needs n >= 3, got {n}")));
    }
    let t = classical_location(k, n)?;
    if t.abs() > BULK_LIMIT {
        return Err(Error::Domain(format!(
            "eigenvalue {k} of {n} sits at {t:.4}, outside the bulk; use edge_center_scale"
        )));
    }
    let nf = n as f64;
    Ok((nf.ln() / (8.0 * nf * nf * (1.0 - t * t))).sqrt())
}

/// Center and scale for eigenvalue number `n - k`, `2 <= k << n`.
pub fn edge_center_scale(k: usize, n: usize) -> Result<(f64, f64)> {
    if k < 2 || k >= n {
        return Err(Error::Domain(format!("edge_center_scale needs 2 <= k < n, got k={k}, n={n}")));
    }
    let (kf, nf) = (k as f64, n as f64);
    let center = 1.0 - (3.0 * PI * kf / (4.0 * 2f64.sqrt() * nf)).powf(2.0 / 3.0);
    let var = (1.0 / (12.0 * PI)).powf(2.0 / 3.0) * kf.ln() / (nf.cbrt() * kf.powf(2.0 / 3.0));
    Ok((center, var.sqrt() / (2.0 * nf).sqrt()))
}
