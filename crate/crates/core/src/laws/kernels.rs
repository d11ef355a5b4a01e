use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest `k` accepted by [`r_k_det`].
pub const MAX_CORRELATION_ORDER: usize = 6;

/// `sin(pi r) / (pi r)`, equal to 1 at `r = 0`.
pub fn sinc_pi(r: f64) -> f64 {
    if r == 0.0 {
        1.0
    } else {
        (PI * r).sin() / (PI * r)
    }
}

/// Sine kernel with unit density on the diagonal. For `beta = 1` the term
/// `sinc(y + z)` is added.
pub fn sine_kernel(y: f64, z: f64, beta: u8) -> Result<f64> {
    match beta {
        2 => Ok(sinc_pi(y - z)),
        1 => Ok(sinc_pi(y - z) + sinc_pi(y + z)),
        _ => Err(Error::Domain(format!("sine kernel defined for beta 1 or 2, got {beta}"))),
    }
}

/// `det(K(y_i, y_j))` for `1 <= k <= 6` points.
pub fn r_k_det(points: &[f64], beta: u8) -> Result<f64> {
    let k = points.len();
    if k == 0 || k > MAX_CORRELATION_ORDER {
        return Err(Error::Domain(format!(
            "r_k_det supports 1..={MAX_CORRELATION_ORDER} points, got {k}"
        )));
    }
    let mut a = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            a[i * k + j] = sine_kernel(points[i], points[j], beta)?;
        }
    }
    Ok(lu_determinant(&mut a, k))
}

/// Determinant by Gaussian elimination with partial pivoting (destroys `a`).
fn lu_determinant(a: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..k {
        let p = (c..k)
            .max_by(|&x, &y| a[x * k + c].abs().total_cmp(&a[y * k + c].abs()))
            .unwrap_or(c);
        if a[p * k + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for j in 0..k {
                a.swap(p * k + j, c * k + j);
            }
            det = -det;
        }
        let piv = a[c * k + c];
        det *= piv;
        for r in c + 1..k {
            let f = a[r * k + c] / piv;
            if f != 0.0 {
                for j in c..k {
                    a[r * k + j] -= f * a[c * k + j];
                }
            }
        }
    }
    det
}

fn check_beta(beta: u8) -> Result<()> {
    if beta == 1 || beta == 2 {
        Ok(())
    } else {
        Err(Error::Domain(format!("joint density defined for beta 1 or 2, got {beta}")))
    }
}

/// Unnormalized log of the joint eigenvalue density,
/// `beta sum_{i<j} ln|l_i - l_j| - beta n sum l_i^2`.
///
/// Returns `f64::NEG_INFINITY` when two eigenvalues coincide.
pub fn joint_logdensity(lambdas: &[f64], beta: u8, n: usize) -> Result<f64> {
    check_beta(beta)?;
    if lambdas.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("joint_logdensity needs finite eigenvalues".into()));
    }
    let b = beta as f64;
    let mut vandermonde = 0.0;
    for i in 0..lambdas.len() {
        for j in i + 1..lambdas.len() {
            let d = (lambdas[i] - lambdas[j]).abs();
            if d == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            vandermonde += d.ln();
        }
    }
    let sq: f64 = lambdas.iter().map(|x| x * x).sum();
    Ok(b * vandermonde - b * n as f64 * sq)
}

/// Gradient of [`joint_logdensity`] with respect to each eigenvalue.
pub fn joint_logdensity_gradient(lambdas: &[f64], beta: u8, n: usize) -> Result<Vec<f64>> {
    check_beta(beta)?;
    let b = beta as f64;
    let mut g = Vec::with_capacity(lambdas.len());
    for (i, &li) in lambdas.iter().enumerate() {
        let mut s = 0.0;
        for (j, &lj) in lambdas.iter().enumerate() {
            if i != j {
                if li == lj {
                    return Err(Error::Domain("gradient undefined at coincident eigenvalues".into()));
                }
                s += 1.0 / (li - lj);
            }
        }
        g.push(b * s - 2.0 * b * n as f64 * li);
    }
    Ok(g)
}

/// Limiting edge-measure density `(2 sqrt 2 / pi) sqrt x` for `x >= 0`.
pub fn edge_measure_density(x: f64) -> f64 {
    if x > 0.0 {
        2.0 * 2f64.sqrt() / PI * x.sqrt()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_from_seed;
    use rand::Rng as _;

    #[test]
    fn sine_kernel_values() {
        assert_eq!(sine_kernel(0.3, 0.3, 2).unwrap(), 1.0);
        for m in 1..5 {
            assert!(sine_kernel(m as f64 + 0.2, 0.2, 2).unwrap().abs() < 1e-15);
        }
        assert!((sine_kernel(0.5, 0.0, 2).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!((sine_kernel(0.5, 0.0, 2).unwrap() - 0.63662).abs() < 1e-5);
        assert!(sine_kernel(0.0, 0.0, 3).is_err());
        // beta = 1 adds the reflected term
        assert!((sine_kernel(0.25, 0.25, 1).unwrap() - (1.0 + sinc_pi(0.5))).abs() < 1e-15);
    }

    #[test]
    fn two_point_determinant() {
        assert_eq!(r_k_det(&[0.7], 2).unwrap(), 1.0);
        for r in [0.1, 0.5, 1.3, 2.7] {
            let d = r_k_det(&[0.0, r], 2).unwrap();
            let s = (PI * r).sin() / (PI * r);
            assert!((d - (1.0 - s * s)).abs() < 1e-14);
        }
        assert!(r_k_det(&[0.0, 1e-6], 2).unwrap() < 1e-10);
        assert!(r_k_det(&[], 2).is_err());
        assert!(r_k_det(&[0.0; 7], 2).is_err());
    }

    #[test]
    fn determinant_of_coincident_points_vanishes() {
        assert!(r_k_det(&[0.1, 0.5, 0.5], 2).unwrap().abs() < 1e-14);
    }

    #[test]
    fn lu_determinant_known() {
        let mut a = [0.0, 2.0, 1.0, 1.0, 0.0, 3.0, 4.0, 1.0, 0.0];
        // cofactor expansion: 0*(0-3) - 2*(0-12) + 1*(1-0) = 25
        assert!((lu_determinant(&mut a, 3) - 25.0).abs() < 1e-13);
    }

    #[test]
    fn joint_density_properties() {
        assert_eq!(joint_logdensity(&[0.1, 0.1], 1, 2).unwrap(), f64::NEG_INFINITY);
        let a = joint_logdensity(&[0.3, -0.2, 0.5], 2, 3).unwrap();
        let b = joint_logdensity(&[0.5, 0.3, -0.2], 2, 3).unwrap();
        assert_eq!(a, b);
        assert!(joint_logdensity(&[0.1, 0.2], 4, 2).is_err());
    }

    #[test]
    fn joint_density_two_by_two_recomputation() {
        let (a, b) = (0.013, 0.021);
        let n = 2.0;
        let direct = |x: f64| (2.0 * x).ln() - n * 2.0 * x * x;
        let lhs = joint_logdensity(&[-a, a], 1, 2).unwrap() - joint_logdensity(&[-b, b], 1, 2).unwrap();
        let rhs = (a / b).ln() - 2.0 * n * (a * a - b * b);
        assert!((lhs - rhs).abs() < 1e-12);
        assert!((joint_logdensity(&[-a, a], 1, 2).unwrap() - direct(a)).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = rng_from_seed(77);
        for n in 2..=6 {
            for beta in [1u8, 2] {
                let l: Vec<f64> = (0..n).map(|i| -0.8 + 0.3 * i as f64 + 0.1 * rng.random::<f64>()).collect();
                let g = joint_logdensity_gradient(&l, beta, n).unwrap();
                let h = 1e-6;
                for i in 0..n {
                    let mut p = l.clone();
                    let mut m = l.clone();
                    p[i] += h;
                    m[i] -= h;
                    let fd = (joint_logdensity(&p, beta, n).unwrap()
                        - joint_logdensity(&m, beta, n).unwrap())
                        / (2.0 * h);
                    assert!((fd - g[i]).abs() < 1e-6, "n={n} i={i}: {fd} vs {}", g[i]);
                }
            }
        }
    }

    #[test]
    fn edge_density_values() {
        assert_eq!(edge_measure_density(0.0), 0.0);
        assert_eq!(edge_measure_density(-0.5), 0.0);
        assert!((edge_measure_density(1.0) - 0.90032).abs() < 1e-5);
    }
}
