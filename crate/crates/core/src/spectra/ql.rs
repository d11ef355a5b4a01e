use super::{Spectrum, TridiagonalMatrix};
use crate::error::{Error, Result};

/// Iteration cap per eigenvalue; exceeding it signals a bug, not bad input.
pub const MAX_QL_ITERATIONS: usize = 50;

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. `e_i` is deflated once
/// `|e_i| <= eps (|d_i| + |d_{i+1}|)`.
pub fn tridiagonal_eigenvalues(t: &TridiagonalMatrix) -> Result<Spectrum> {
    let n = t.dim();
    let mut d = t.diag().to_vec();
    let mut e = t.offdiag().to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::Numeric(format!(
                    "QL iteration did not converge for eigenvalue {l} in {MAX_QL_ITERATIONS} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Spectrum::from_values(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let t = TridiagonalMatrix::new(vec![3.0, -1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(tridiagonal_eigenvalues(&t).unwrap().values(), &[-1.0, 2.0, 3.0]);
    }

    #[test]
    fn free_laplacian_closed_form() {
        // tridiag(1, 0, 1) of size n has eigenvalues 2 cos(k pi/(n+1))
        let n = 50;
        let t = TridiagonalMatrix::new(vec![0.0; n], vec![1.0; n - 1]).unwrap();
        let s = tridiagonal_eigenvalues(&t).unwrap();
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in s.values().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_matrix() {
        let t = TridiagonalMatrix::new(vec![0.0; 4], vec![0.0; 3]).unwrap();
        assert!(tridiagonal_eigenvalues(&t).unwrap().values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn graded_entries() {
        // widely varying magnitudes still converge and conserve the trace
        let d: Vec<f64> = (0..30).map(|i| 10f64.powi(i % 7 - 3)).collect();
        let e: Vec<f64> = (0..29).map(|i| 10f64.powi(-(i % 5))).collect();
        let t = TridiagonalMatrix::new(d, e).unwrap();
        let s = tridiagonal_eigenvalues(&t).unwrap();
        let (dt, df) = s.invariant_residuals(t.trace(), t.frobenius_sq());
        assert!(dt < 1e-12 && df < 1e-12);
    }
}
