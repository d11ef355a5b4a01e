use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::laws::ReferenceCdf;

/// Outcome of a Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    /// Supremum distance between the distribution functions.
    pub d: f64,
    /// Asymptotic p-value `Q(sqrt(n_eff) d)`.
    pub p_value: f64,
    pub n_eff: f64,
}

impl KsResult {
    fn new(d: f64, n_eff: f64) -> Self {
        KsResult { d, p_value: kolmogorov_survival(n_eff.sqrt() * d), n_eff }
    }
}

/// `P(K > t)` for the Kolmogorov distribution, series truncated once terms
/// fall below `1e-12`.
pub fn kolmogorov_survival(t: f64) -> f64 {
    if !(t > 0.0) {
        return 1.0;
    }
    if t < 1.18 {
        // P(K <= t) = sqrt(2 pi)/t sum_k exp(-(2k-1)^2 pi^2 / (8 t^2))
        let mut s = 0.0;
        for k in 1..100 {
            let m = (2 * k - 1) as f64;
            let term = (-m * m * PI * PI / (8.0 * t * t)).exp();
            s += term;
            if term < 1e-12 * s.max(1e-300) {
                break;
            }
        }
        (1.0 - (2.0 * PI).sqrt() / t * s).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        for k in 1..100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * t * t).exp();
            s += if k % 2 == 1 { term } else { -term };
            if term < 1e-12 {
                break;
            }
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

fn sorted_finite(sample: &[f64], what: &str) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::Domain(format!("{what}: empty sample")));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("{what}: non-finite value in sample")));
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample test against an arbitrary distribution function.
pub fn ks_one_sample_with<F>(sample: &[f64], mut cdf: F) -> Result<KsResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let v = sorted_finite(sample, "ks_one_sample")?;
    let m = v.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < v.len() {
        let x = v[i];
        let mut j = i;
        while j < v.len() && v[j] == x {
            j += 1;
        }
        let f = cdf(x)?;
        d = d.max(f - i as f64 / m).max(j as f64 / m - f);
        i = j;
    }
    Ok(KsResult::new(d.clamp(0.0, 1.0), m))
}

/// One-sample test against a reference law.
pub fn ks_one_sample(sample: &[f64], cdf: ReferenceCdf) -> Result<KsResult> {
    cdf.prepare()?;
    ks_one_sample_with(sample, |x| cdf.eval(x))
}

/// Two-sample test with effective size `mn/(m+n)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let a = sorted_finite(a, "ks_two_sample")?;
    let b = sorted_finite(b, "ks_two_sample")?;
    let (m, n) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / m - j as f64 / n).abs());
    }
    Ok(KsResult::new(d, m * n / (m + n)))
}
