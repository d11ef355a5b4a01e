use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Semicircle density `(2/pi) sqrt(1 - t^2)` on `[-1, 1]`.
pub fn semicircle_density(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        2.0 / PI * (1.0 - t * t).sqrt()
    }
}

/// `G(t) = 1/2 + (t sqrt(1 - t^2) + asin t) / pi`, clamped to 0 and 1
/// outside `[-1, 1]`.
pub fn semicircle_cdf(t: f64) -> f64 {
    if t <= -1.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        (0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI).clamp(0.0, 1.0)
    }
}

/// `G^{-1}(p)` by bisection followed by Newton polishing.
pub fn semicircle_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("semicircle quantile needs 0 < p < 1, got {p}")));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // solve on the lower half and reflect, which makes G^{-1}(1-p) = -G^{-1}(p) exact
    let (q, sign) = if p > 0.5 { (1.0 - p, 1.0) } else { (p, -1.0) };
    let (mut lo, mut hi) = (-1.0f64, 0.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if semicircle_cdf(mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..4 {
        let dens = semicircle_density(t);
        if dens <= 0.0 {
            break;
        }
        let next = t - (semicircle_cdf(t) - q) / dens;
        if !(lo..=hi).contains(&next) {
            break;
        }
        t = next;
    }
    Ok(-sign * t)
}

/// Classical location `G^{-1}(k/n)` of the `k`-th eigenvalue.
pub fn classical_location(k: usize, n: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::Domain(format!("classical location needs 1 <= k <= n-1, got k={k}, n={n}")));
    }
    semicircle_quantile(k as f64 / n as f64)
}

/// First-order expected number of eigenvalues in `[a, b]`: `n (G(b) - G(a))`.
pub fn expected_count(a: f64, b: f64, n: usize) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("expected_count needs a < b, got [{a}, {b}]")));
    }
    Ok(n as f64 * (semicircle_cdf(b) - semicircle_cdf(a)))
}
