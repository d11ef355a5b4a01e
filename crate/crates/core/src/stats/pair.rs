use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

pub const MIN_PAIR_SPECTRA: usize = 50;
pub const MAX_HALF_WIDTH: f64 = 0.1;
/// Bins with fewer pairs are flagged and left out of comparisons.
pub const MIN_BIN_PAIRS: u64 = 20;

/// Binned two-point correlation estimate in unfolded units.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationEstimate {
    pub bin_centers: Vec<f64>,
    pub values: Vec<f64>,
    pub counts: Vec<u64>,
    /// Pairs expected per bin for independent points at unit density.
    pub expected: Vec<f64>,
    pub flagged: Vec<bool>,
    pub n: usize,
    pub reps: usize,
}

impl CorrelationEstimate {
    /// Poisson standard error of each bin value.
    pub fn std_errors(&self) -> Vec<f64> {
        self.counts.iter().zip(&self.expected).map(|(&c, &e)| (c as f64).sqrt() / e).collect()
    }

    /// Largest `|value - reference(center)|` over unflagged bins.
    pub fn max_deviation(&self, reference: impl Fn(f64) -> f64) -> f64 {
        self.bin_centers
            .iter()
            .zip(&self.values)
            .zip(&self.flagged)
            .filter(|(_, &f)| !f)
            .map(|((&y, &v), _)| (v - reference(y)).abs())
            .fold(0.0, f64::max)
    }
}

/// Pair correlation near 0. Eigenvalues in `[-w, w]` are unfolded by the
/// semicircle density at the origin, `2n/pi`; unordered pair separations
/// in `(0, y_max]` are binned and divided by `reps * int_bin (L - y) dy`,
/// the count expected for independent points on a window of unfolded
/// length `L = 2w * 2n/pi`.
pub fn pair_correlation(
    spectra: &[Spectrum],
    half_width: f64,
    bins: usize,
    y_max: f64,
) -> Result<CorrelationEstimate> {
    if spectra.len() < MIN_PAIR_SPECTRA {
        return Err(Error::Domain(format!(
            "pair_correlation needs at least {MIN_PAIR_SPECTRA} spectra, got {}",
            spectra.len()
        )));
    }
    if !(half_width > 0.0 && half_width <= MAX_HALF_WIDTH) {
        return Err(Error::Domain(format!("half width must lie in (0, {MAX_HALF_WIDTH}], got {half_width}")));
    }
    if bins == 0 || !(y_max > 0.0) {
        return Err(Error::Domain("pair_correlation needs bins >= 1 and y_max > 0".into()));
    }
    let n = spectra[0].dim();
    if spectra.iter().any(|s| s.dim() != n) {
        return Err(Error::Domain("spectra of different sizes".into()));
    }
    let rho = 2.0 * n as f64 / PI;
    let len = 2.0 * half_width * rho;
    if y_max >= len {
        return Err(Error::Domain(format!("y_max = {y_max} exceeds the unfolded window {len}")));
    }
    let h = y_max / bins as f64;
    let mut counts = vec![0u64; bins];
    for s in spectra {
        let v = s.values();
        let lo = v.partition_point(|&x| x < -half_width);
        let hi = v.partition_point(|&x| x <= half_width);
        let window = &v[lo..hi];
        for (i, &a) in window.iter().enumerate() {
            for &b in &window[i + 1..] {
                let y = (b - a) * rho;
                if y > y_max {
                    break;
                }
                if y > 0.0 {
                    let k = ((y / h).ceil() as usize).clamp(1, bins) - 1;
                    counts[k] += 1;
                }
            }
        }
    }
    let reps = spectra.len() as f64;
    let mut bin_centers = Vec::with_capacity(bins);
    let mut expected = Vec::with_capacity(bins);
    for k in 0..bins {
        let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
        bin_centers.push(0.5 * (a + b));
        expected.push(reps * (len * (b - a) - 0.5 * (b * b - a * a)));
    }
    let values = counts.iter().zip(&expected).map(|(&c, &e)| c as f64 / e).collect();
    let flagged = counts.iter().map(|&c| c < MIN_BIN_PAIRS).collect();
    Ok(CorrelationEstimate { bin_centers, values, counts, expected, flagged, n, reps: spectra.len() })
}
