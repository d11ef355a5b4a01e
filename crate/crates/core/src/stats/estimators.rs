use crate::error::{Error, Result};
use crate::laws::{bulk_sigma, classical_location};
use crate::spectra::Spectrum;

/// Smallest number of spectra accepted by [`gap_correlation`].
pub const MIN_GAP_SPECTRA: usize = 500;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

pub fn mean_estimate(values: &[f64]) -> Result<MeanEstimate> {
    if values.is_empty() {
        return Err(Error::Domain("mean of an empty sample".into()));
    }
    let m = values.len() as f64;
    let mean = neumaier_sum(values.iter().copied()) / m;
    let var = if values.len() > 1 {
        neumaier_sum(values.iter().map(|x| (x - mean) * (x - mean))) / (m - 1.0)
    } else {
        0.0
    };
    Ok(MeanEstimate { mean, std_error: (var / m).sqrt(), count: values.len() })
}

/// Compensated (Neumaier) summation.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Pearson correlation; errors when either sample has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Domain("pearson needs two samples of equal length >= 2".into()));
    }
    let m = a.len() as f64;
    let ma = neumaier_sum(a.iter().copied()) / m;
    let mb = neumaier_sum(b.iter().copied()) / m;
    let sab = neumaier_sum(a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)));
    let saa = neumaier_sum(a.iter().map(|x| (x - ma) * (x - ma)));
    let sbb = neumaier_sum(b.iter().map(|y| (y - mb) * (y - mb)));
    if !(saa > 0.0 && sbb > 0.0) {
        return Err(Error::Numeric("correlation of a sample with zero variance".into()));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// `(lambda - G^{-1}(k/n)) / sigma(k, n)`.
pub fn normalize_bulk_value(lambda: f64, k: usize, n: usize) -> Result<f64> {
    let sigma = bulk_sigma(k, n)?;
    Ok((lambda - classical_location(k, n)?) / sigma)
}

/// The `k`-th smallest eigenvalue (1-based) centered at its classical
/// location and divided by the bulk fluctuation scale.
pub fn normalize_bulk(spec: &Spectrum, k: usize, n: usize) -> Result<f64> {
    if spec.dim() != n {
        return Err(Error::Domain(format!("spectrum has {} values, expected {n}", spec.dim())));
    }
    if k == 0 || k > n {
        return Err(Error::Domain(format!("eigenvalue index {k} outside 1..={n}")));
    }
    normalize_bulk_value(spec.values()[k - 1], k, n)
}

/// `(lambda_max - 1) 2 n^{2/3}`.
pub fn rescale_edge(spec: &Spectrum, n: usize) -> f64 {
    (spec.max() - 1.0) * 2.0 * (n as f64).powf(2.0 / 3.0)
}

/// `(sum_i lambda_i^p) p^{3/2} / n` for even `p >= 2`, with `n` the number
/// of eigenvalues.
pub fn trace_moment(spec: &Spectrum, p: u32) -> Result<f64> {
    if p < 2 || p % 2 == 1 {
        return Err(Error::Domain(format!("trace_moment needs an even power p >= 2, got {p}")));
    }
    let s = neumaier_sum(spec.values().iter().map(|x| x.powi(p as i32)));
    Ok(s * (p as f64).powf(1.5) / spec.dim() as f64)
}

/// The power `2 floor(n^{1/3})`.
pub fn default_trace_power(n: usize) -> u32 {
    2 * (n as f64).cbrt().floor() as u32
}

/// Number of eigenvalues in `[a, b]`.
pub fn counting_statistic(spec: &Spectrum, a: f64, b: f64) -> Result<usize> {
    if !(a < b) {
        return Err(Error::Domain(format!("counting interval needs a < b, got [{a}, {b}]")));
    }
    let v = spec.values();
    let lo = v.partition_point(|&x| x < a);
    let hi = v.partition_point(|&x| x <= b);
    Ok(hi - lo)
}

/// Empirical probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionEstimate {
    pub p: f64,
    pub std_error: f64,
    pub hits: usize,
    pub total: usize,
}

impl ProportionEstimate {
    pub fn from_counts(hits: usize, total: usize) -> Self {
        let p = hits as f64 / total as f64;
        ProportionEstimate { p, std_error: (p * (1.0 - p) / total as f64).sqrt(), hits, total }
    }

    /// `sqrt(se_a^2 + se_b^2)`.
    pub fn combined_se(&self, other: &ProportionEstimate) -> f64 {
        self.std_error.hypot(other.std_error)
    }
}

/// Frequency of `b sqrt(ln n)/sqrt(n) <= x <= c sqrt(ln n)/sqrt(n)` over
/// realizations of one eigenvalue.
pub fn interval_probability(samples: &[f64], b: f64, c: f64, n: usize) -> Result<ProportionEstimate> {
    if samples.is_empty() {
        return Err(Error::Domain("interval_probability: empty sample".into()));
    }
    if b > c || b.is_nan() || c.is_nan() {
        return Err(Error::Domain(format!("interval_probability needs b <= c, got b={b}, c={c}")));
    }
    let w = ((n as f64).ln() / n as f64).sqrt();
    let (lo, hi) = (b * w, c * w);
    let hits = samples.iter().filter(|&&x| x >= lo && x <= hi).count();
    Ok(ProportionEstimate::from_counts(hits, samples.len()))
}

/// Pearson correlation across spectra of the bulk-normalized eigenvalues
/// `k1` and `k2`.
pub fn gap_correlation(spectra: &[Spectrum], k1: usize, k2: usize, n: usize) -> Result<f64> {
    if spectra.len() < MIN_GAP_SPECTRA {
        return Err(Error::Domain(format!(
            "gap_correlation needs at least {MIN_GAP_SPECTRA} spectra, got {}",
            spectra.len()
        )));
    }
    let a = spectra.iter().map(|s| normalize_bulk(s, k1, n)).collect::<Result<Vec<_>>>()?;
    if k1 == k2 {
        return Ok(1.0);
    }
    let b = spectra.iter().map(|s| normalize_bulk(s, k2, n)).collect::<Result<Vec<_>>>()?;
    pearson(&a, &b)
}

/// Index pair for the gap experiment at exponent `theta`:
/// `m = floor(n^theta)`, `k1 = n/2 - m/2`, `k2 = k1 + m`.
pub fn gap_indices(n: usize, theta: f64) -> Result<(usize, usize)> {
    let m = (n as f64).powf(theta).floor() as usize;
    let k1 = (n / 2).checked_sub(m / 2).filter(|&k| k >= 1);
    match k1 {
        Some(k1) if k1 + m < n && m >= 1 => Ok((k1, k1 + m)),
        _ => Err(Error::Config(format!("gap exponent {theta} leaves the bulk for n={n}"))),
    }
}
