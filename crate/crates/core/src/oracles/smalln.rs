//! Event probabilities for one ordered eigenvalue of a `n <= 3` Gaussian
//! ensemble, by nested Gauss–Legendre quadrature of the joint density.

use super::quadrature::gauss_legendre;
use crate::error::{Error, Result};

/// Half-width of the integration box. The density decays like
/// `exp(-beta n x^2)`, so the mass outside `[-4, 4]` is below `1e-7`.
pub const SMALLN_HALF_WIDTH: f64 = 4.0;
const NODES_PER_PANEL: usize = 12;
const COARSE_PANELS: usize = 6;
const REFINEMENT_TOL: f64 = 1e-6;

/// The event `lower <= lambda_k <= upper` for the `k`-th smallest
/// eigenvalue (`k` is 1-based). Infinite bounds are allowed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenEvent {
    pub k: usize,
    pub lower: f64,
    pub upper: f64,
}

fn density(l: &[f64], beta: f64, n: f64) -> f64 {
    let mut v = 1.0;
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            v *= (l[j] - l[i]).abs().powf(beta);
        }
    }
    let sq: f64 = l.iter().map(|x| x * x).sum();
    v * (-beta * n * sq).exp()
}

struct Nested<'a> {
    rule: &'a (Vec<f64>, Vec<f64>),
    panels: usize,
    n: usize,
    beta: f64,
    event: Option<EigenEvent>,
}

impl Nested<'_> {
    /// Integrates over `lambda_level <= ... <= lambda_n` given the
    /// earlier coordinates in `prefix`.
    fn level(&self, prefix: &mut Vec<f64>) -> f64 {
        let depth = prefix.len();
        if depth == self.n {
            return density(prefix, self.beta, self.n as f64);
        }
        let mut lo = prefix.last().copied().unwrap_or(-SMALLN_HALF_WIDTH);
        let mut hi = SMALLN_HALF_WIDTH;
        let mut breaks = Vec::new();
        if let Some(ev) = self.event {
            if ev.k == depth + 1 {
                lo = lo.max(ev.lower);
                hi = hi.min(ev.upper);
            } else if depth + 1 < ev.k {
                // earlier eigenvalues sit below lambda_k, and the inner range
                // switches from [lambda, ..] to [lower, ..] at lambda = lower
                hi = hi.min(ev.upper);
                if ev.lower > lo && ev.lower < hi {
                    breaks.push(ev.lower);
                }
            }
        }
        if hi <= lo {
            return 0.0;
        }
        let mut edges = vec![lo];
        edges.extend(breaks);
        edges.push(hi);
        let (x, w) = self.rule;
        let mut total = 0.0;
        for seg in edges.windows(2) {
            let width = (seg[1] - seg[0]) / self.panels as f64;
            for p in 0..self.panels {
                let mid = seg[0] + (p as f64 + 0.5) * width;
                for (xi, wi) in x.iter().zip(w) {
                    prefix.push(mid + 0.5 * width * xi);
                    total += 0.5 * width * wi * self.level(prefix);
                    prefix.pop();
                }
            }
        }
        total
    }
}

fn probability(n: usize, beta: u8, event: EigenEvent, panels: usize) -> Result<f64> {
    let rule = gauss_legendre(NODES_PER_PANEL);
    let mut nested = Nested { rule: &rule, panels, n, beta: beta as f64, event: None };
    let z = nested.level(&mut Vec::with_capacity(n));
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Oracle(format!("normalization failed for n={n}, beta={beta}: {z}")));
    }
    nested.event = Some(event);
    Ok(nested.level(&mut Vec::with_capacity(n)) / z)
}

/// `P(lower <= lambda_k <= upper)` under the joint density
/// `prod |l_i - l_j|^beta exp(-beta n sum l_i^2)`.
///
/// The result is computed on two grids (one twice as fine) and rejected if
/// they differ by more than `1e-6`.
pub fn smalln_event_probability(n: usize, beta: u8, event: EigenEvent) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::Domain(format!("small-n oracle supports 1 <= n <= 3, got {n}")));
    }
    if beta != 1 && beta != 2 {
        return Err(Error::Domain(format!("beta must be 1 or 2, got {beta}")));
    }
    if event.k == 0 || event.k > n {
        return Err(Error::Domain(format!("eigenvalue index {} outside 1..={n}", event.k)));
    }
    if event.lower.is_nan() || event.upper.is_nan() {
        return Err(Error::Domain("event bounds must not be NaN".into()));
    }
    let coarse = probability(n, beta, event, COARSE_PANELS)?;
    let fine = probability(n, beta, event, 2 * COARSE_PANELS)?;
    if (fine - coarse).abs() > REFINEMENT_TOL {
        return Err(Error::Oracle(format!(
            "small-n quadrature not converged: {coarse} vs {fine}"
        )));
    }
    Ok(fine.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(k: usize, lower: f64, upper: f64) -> EigenEvent {
        EigenEvent { k, lower, upper }
    }

    #[test]
    fn whole_range_has_unit_mass() {
        for n in 1..=3 {
            for beta in [1, 2] {
                for k in 1..=n {
                    let p = smalln_event_probability(n, beta, ev(k, f64::NEG_INFINITY, f64::INFINITY)).unwrap();
                    assert!((p - 1.0).abs() < 1e-6, "n={n} beta={beta} k={k}: {p}");
                }
            }
        }
    }

    #[test]
    fn median_of_three_is_symmetric() {
        for beta in [1, 2] {
            for c in [0.1, 0.3, 0.7] {
                let up = smalln_event_probability(3, beta, ev(2, 0.0, c)).unwrap();
                let down = smalln_event_probability(3, beta, ev(2, -c, 0.0)).unwrap();
                assert!((up - down).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn one_by_one_is_gaussian() {
        // n = 1, beta = 1: density exp(-x^2), i.e. N(0, 1/2)
        let p = smalln_event_probability(1, 1, ev(1, f64::NEG_INFINITY, 0.5)).unwrap();
        let exact = 0.5 * libm::erfc(-0.5);
        assert!((p - exact).abs() < 1e-8, "{p} vs {exact}");
    }

    #[test]
    fn two_by_two_goe_closed_form() {
        // n = 2, beta = 1: with s = l1 + l2 and d = l2 - l1 the density is
        // d exp(-s^2 - d^2), so s ~ N(0, 1/2) and P(d > a) = exp(-a^2).
        // P(l2 <= 0) = E[(1 - exp(-s^2)); s < 0] = (1 - 1/sqrt 2) / 2.
        let p = smalln_event_probability(2, 1, ev(2, f64::NEG_INFINITY, 0.0)).unwrap();
        let exact = 0.5 * (1.0 - std::f64::consts::FRAC_1_SQRT_2);
        assert!((p - exact).abs() < 1e-8, "{p} vs {exact}");
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(smalln_event_probability(4, 1, ev(1, 0.0, 1.0)).is_err());
        assert!(smalln_event_probability(2, 3, ev(1, 0.0, 1.0)).is_err());
        assert!(smalln_event_probability(2, 1, ev(3, 0.0, 1.0)).is_err());
    }
}
