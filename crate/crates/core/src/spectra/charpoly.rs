use super::Spectrum;
use crate::ensembles::SymmetricMatrix;
use crate::error::{Error, Result};

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(a: &[f64], n: usize) -> f64 {
    match n {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        _ => {
            let mut det = 0.0;
            let mut minor = vec![0.0; (n - 1) * (n - 1)];
            for c in 0..n {
                let mut k = 0;
                for i in 1..n {
                    for j in 0..n {
                        if j != c {
                            minor[k] = a[i * n + j];
                            k += 1;
                        }
                    }
                }
                let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * a[c] * cofactor_det(&minor, n - 1);
            }
            det
        }
    }
}

/// Number of eigenvalues strictly below `x`: sign changes in the sequence
/// of leading principal minors `1, D_1(x), ..., D_n(x)` of `A - xI`.
/// `None` if some minor vanishes exactly.
fn count_below(a: &[f64], n: usize, x: f64) -> Option<usize> {
    let mut prev = 1.0f64;
    let mut changes = 0;
    for k in 1..=n {
        let mut sub = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                sub[i * k + j] = a[i * n + j] - if i == j { x } else { 0.0 };
            }
        }
        let dk = cofactor_det(&sub, k);
        if dk == 0.0 {
            return None;
        }
        if (dk < 0.0) != (prev < 0.0) {
            changes += 1;
        }
        prev = dk;
    }
    Some(changes)
}

fn count_below_robust(a: &[f64], n: usize, x: f64, width: f64) -> usize {
    let mut y = x;
    for k in 0..64 {
        if let Some(c) = count_below(a, n, y) {
            return c;
        }
        y = x + width * 1e-3 * (k + 1) as f64;
    }
    // only reachable for pathological inputs; fall back to the last probe
    count_below(a, n, y + width).unwrap_or(0)
}

/// Eigenvalues of a matrix with `n <= 4` from the characteristic polynomial:
/// bisection on the minor sign-change count, refined to `1e-12`. `n = 1, 2`
/// use closed forms.
pub fn charpoly_oracle(m: &SymmetricMatrix) -> Result<Spectrum> {
    let n = m.dim();
    if n > 4 {
        return Err(Error::Domain(format!("charpoly oracle supports n <= 4, got {n}")));
    }
    let a = m.to_dense();
    match n {
        1 => return Spectrum::from_values(vec![a[0]]),
        2 => {
            let mean = 0.5 * (a[0] + a[3]);
            let rad = (0.5 * (a[0] - a[3])).hypot(a[1]);
            return Spectrum::from_values(vec![mean - rad, mean + rad]);
        }
        _ => {}
    }
    // Gershgorin enclosure
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r: f64 = (0..n).filter(|&j| j != i).map(|j| a[i * n + j].abs()).sum();
        lo = lo.min(a[i * n + i] - r);
        hi = hi.max(a[i * n + i] + r);
    }
    let pad = 1e-3 * (hi - lo).max(1.0);
    lo -= pad;
    hi += pad;

    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let (mut l, mut h) = (lo, hi);
        for _ in 0..200 {
            if h - l <= 1e-13 * l.abs().max(h.abs()).max(1.0) {
                break;
            }
            let mid = 0.5 * (l + h);
            if count_below_robust(&a, n, mid, h - l) > j {
                h = mid;
            } else {
                l = mid;
            }
        }
        values.push(0.5 * (l + h));
    }
    Spectrum::from_values(values)
}
