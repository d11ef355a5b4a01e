//! `F_2(x) = det(I - K_Ai)` on `L^2(x, inf)` by Nyström discretization.

use std::f64::consts::PI;

use super::quadrature::{composite, gauss_legendre};
use crate::error::{Error, Result};

/// Length of the truncated integration interval `[x, x + L]`.
pub const FREDHOLM_LENGTH: f64 = 20.0;
pub const MIN_ORDER: usize = 20;
pub const MAX_ORDER: usize = 200;
pub const SELF_CONVERGENCE_TOL: f64 = 1e-8;

/// Airy function from the contour integral
/// `Ai(x) = (1/pi) int_0^inf exp(-r^3/3 - x r/2) sin(pi/3 - sqrt(3) x r/2) dr`
/// and the matching representation of `Ai'`.
pub struct ContourAiry {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl ContourAiry {
    pub fn new() -> Self {
        let (nodes, weights) = composite(&gauss_legendre(24), 0.0, 9.0, 36);
        ContourAiry { nodes, weights }
    }

    /// `(Ai(x), Ai'(x))`, accurate to about `1e-13` for `-10 <= x <= 30`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let c = 0.5 * 3f64.sqrt() * x;
        let (mut ai, mut aip) = (0.0, 0.0);
        for (&r, &w) in self.nodes.iter().zip(&self.weights) {
            let e = (-r * r * r / 3.0 - 0.5 * x * r).exp() * w;
            ai += e * (PI / 3.0 - c * r).sin();
            aip -= e * r * (2.0 * PI / 3.0 - c * r).sin();
        }
        (ai / PI, aip / PI)
    }
}

impl Default for ContourAiry {
    fn default() -> Self {
        ContourAiry::new()
    }
}

fn lu_det(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..n {
        let mut p = c;
        for r in c + 1..n {
            if a[r * n + c].abs() > a[p * n + c].abs() {
                p = r;
            }
        }
        if a[p * n + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
            }
            det = -det;
        }
        let piv = a[c * n + c];
        det *= piv;
        for r in c + 1..n {
            let f = a[r * n + c] / piv;
            for j in c + 1..n {
                a[r * n + j] -= f * a[c * n + j];
            }
        }
    }
    det
}

/// Tracy–Widom `F_2(x)` as `det(I - sqrt(w) K sqrt(w))` with `order`
/// Gauss–Legendre nodes on `[x, x + 20]`.
pub fn airy_kernel_fredholm_tw2(x: f64, order: usize) -> Result<f64> {
    if !(-10.0..=8.0).contains(&x) {
        return Err(Error::Domain(format!("Fredholm oracle supports [-10, 8], got {x}")));
    }
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::Domain(format!(
            "quadrature order must lie in [{MIN_ORDER}, {MAX_ORDER}], got {order}"
        )));
    }
    let airy = ContourAiry::new();
    let (nodes, weights) = composite(&gauss_legendre(order), x, x + FREDHOLM_LENGTH, 1);
    let vals: Vec<(f64, f64)> = nodes.iter().map(|&s| airy.eval(s)).collect();
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let n = order;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        let (ai, aip) = vals[i];
        for j in 0..n {
            let (aj, ajp) = vals[j];
            let k = if i == j {
                aip * aip - nodes[i] * ai * ai
            } else {
                (ai * ajp - aip * aj) / (nodes[i] - nodes[j])
            };
            m[i * n + j] = if i == j { 1.0 } else { 0.0 } - sw[i] * k * sw[j];
        }
    }
    Ok(lu_det(&mut m, n).clamp(0.0, 1.0))
}

/// `|F(order) - F(order/2)|`, failing with an oracle error when it exceeds
/// `1e-8`.
pub fn fredholm_self_convergence(x: f64, order: usize) -> Result<f64> {
    let fine = airy_kernel_fredholm_tw2(x, order)?;
    let coarse = airy_kernel_fredholm_tw2(x, (order / 2).max(MIN_ORDER))?;
    let diff = (fine - coarse).abs();
    if diff > SELF_CONVERGENCE_TOL {
        return Err(Error::Oracle(format!(
            "Fredholm determinant at x={x} changed by {diff:e} between orders {} and {order}",
            order / 2
        )));
    }
    Ok(diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_airy_reference_values() {
        let airy = ContourAiry::new();
        for (t, ai, aip) in [
            (-10.0, 0.040241238486443190689, 0.9962650441327900559),
            (-5.0, 0.35076100902411431979, 0.32719281855444313679),
            (0.0, 0.35502805388781723926, -0.25881940379280679841),
            (2.5, 0.015725923380470489995, -0.026250881035903230365),
            (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
        ] {
            let (a, ap) = airy.eval(t);
            assert!((a - ai).abs() < 1e-12, "Ai({t}) = {a}");
            assert!((ap - aip).abs() < 1e-12, "Ai'({t}) = {ap}");
        }
    }

    #[test]
    fn right_limit() {
        assert!((airy_kernel_fredholm_tw2(8.0, 60).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn monotone_on_grid() {
        let mut prev = 0.0;
        for i in 0..=24 {
            let x = -6.0 + 0.5 * i as f64;
            let f = airy_kernel_fredholm_tw2(x, 60).unwrap();
            assert!(f >= prev, "x={x}");
            prev = f;
        }
    }

    #[test]
    fn self_convergence_at_zero() {
        let a = airy_kernel_fredholm_tw2(0.0, 80).unwrap();
        let b = airy_kernel_fredholm_tw2(0.0, 160).unwrap();
        assert!((a - b).abs() < 1e-8);
        assert!(fredholm_self_convergence(0.0, 160).unwrap() < 1e-8);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(airy_kernel_fredholm_tw2(9.0, 60).is_err());
        assert!(airy_kernel_fredholm_tw2(0.0, 10).is_err());
        assert!(airy_kernel_fredholm_tw2(0.0, 201).is_err());
    }
}
