use crate::error::{Error, Result};
use crate::spectra::Spectrum;

/// Rescaled edge points `theta_k = (1 - lambda_k) / r_n` inside a window,
/// each carrying mass `1/(n r_n^{3/2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMeasure {
    pub points: Vec<f64>,
    pub mass: f64,
}

impl EdgeMeasure {
    pub fn total_mass(&self) -> f64 {
        self.points.len() as f64 * self.mass
    }
}

fn check_rn(r_n: f64, n: usize) -> Result<()> {
    if !(r_n > 0.0 && r_n.is_finite()) {
        return Err(Error::Domain(format!("r_n must be positive, got {r_n}")));
    }
    if r_n * (n as f64).powf(2.0 / 3.0) < 1.0 {
        return Err(Error::Domain(format!(
            "r_n = {r_n} is below the edge scale n^(-2/3) for n = {n}"
        )));
    }
    Ok(())
}

/// Edge measure of one spectrum restricted to `theta in [0, window]`.
pub fn edge_measure(spec: &Spectrum, r_n: f64, window: f64) -> Result<EdgeMeasure> {
    let n = spec.dim();
    check_rn(r_n, n)?;
    let points = spec
        .values()
        .iter()
        .rev()
        .map(|&l| (1.0 - l) / r_n)
        .skip_while(|&t| t < 0.0)
        .take_while(|&t| t <= window)
        .collect();
    Ok(EdgeMeasure { points, mass: 1.0 / (n as f64 * r_n.powf(1.5)) })
}

/// Averaged edge-measure density on equal bins of `[0, window]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeHistogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub counts: Vec<u64>,
    pub reps: usize,
}

impl EdgeHistogram {
    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// `sum_bins |density - mean of f over the bin| * width`, with the
    /// reference averaged through its antiderivative `big_f`.
    pub fn l1_error(&self, big_f: impl Fn(f64) -> f64) -> f64 {
        self.edges
            .windows(2)
            .zip(&self.density)
            .map(|(w, d)| {
                let h = w[1] - w[0];
                let avg = (big_f(w[1]) - big_f(w[0])) / h;
                (d - avg).abs() * h
            })
            .sum()
    }
}

pub fn edge_histogram(spectra: &[Spectrum], r_n: f64, window: f64, bins: usize) -> Result<EdgeHistogram> {
    if spectra.is_empty() || bins == 0 || !(window > 0.0) {
        return Err(Error::Domain("edge histogram needs spectra, bins >= 1 and window > 0".into()));
    }
    let h = window / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut mass = 0.0;
    for s in spectra {
        let m = edge_measure(s, r_n, window)?;
        mass = m.mass;
        for t in m.points {
            let b = ((t / h) as usize).min(bins - 1);
            counts[b] += 1;
        }
    }
    let reps = spectra.len();
    let density = counts.iter().map(|&c| c as f64 * mass / (reps as f64 * h)).collect();
    let edges = (0..=bins).map(|i| i as f64 * h).collect();
    Ok(EdgeHistogram { edges, density, counts, reps })
}

/// Antiderivative `(4 sqrt 2 / (3 pi)) x^{3/2}` of the limiting edge density.
pub fn edge_measure_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        4.0 * 2f64.sqrt() / (3.0 * std::f64::consts::PI) * x.powf(1.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laws::edge_measure_density;

    #[test]
    fn measure_points_and_mass() {
        let r = 0.05;
        let mut v = vec![0.0; 996];
        v.extend([0.9, 0.95, 0.99, 1.0, 1.01]);
        let s = Spectrum::from_values(v).unwrap();
        let m = edge_measure(&s, r, 2.5).unwrap();
        assert_eq!(m.points.len(), 4);
        assert_eq!(m.points[0], 0.0);
        assert!((m.mass - 1.0 / (1001.0 * r.powf(1.5))).abs() < 1e-15);
        assert!((m.total_mass() - 4.0 * m.mass).abs() < 1e-15);
        assert!(edge_measure(&s, 0.0, 2.0).is_err());
        assert!(edge_measure(&s, 1e-3, 2.0).is_err());
    }

    #[test]
    fn antiderivative_matches_density() {
        let h = 1e-6;
        for x in [0.3, 1.0, 1.7] {
            let d = (edge_measure_cdf(x + h) - edge_measure_cdf(x - h)) / (2.0 * h);
            assert!((d - edge_measure_density(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn perfect_histogram_has_zero_error() {
        let hist = EdgeHistogram {
            edges: vec![0.0, 1.0, 2.0],
            density: vec![edge_measure_cdf(1.0), edge_measure_cdf(2.0) - edge_measure_cdf(1.0)],
            counts: vec![0, 0],
            reps: 1,
        };
        assert!(hist.l1_error(edge_measure_cdf) < 1e-15);
    }
}
