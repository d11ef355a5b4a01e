use super::TridiagonalMatrix;
use crate::ensembles::SymmetricMatrix;
use crate::error::Result;

/// Reduces `m` to tridiagonal form `Q^T A Q` with Householder reflections.
///
/// Only the lower triangle of a dense row-major work array is touched, so
/// both the symmetric matrix-vector product and the rank-2 update walk
/// contiguous row segments.
pub fn tridiagonalize(m: &SymmetricMatrix) -> Result<TridiagonalMatrix> {
    let n = m.dim();
    let mut a = m.to_dense();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let col = |a: &[f64], i: usize| a[(k + 1 + i) * n + k];
        let alpha = col(&a, 0);
        let xnorm = (1..len).map(|i| col(&a, i)).fold(0.0f64, |acc, x| acc.hypot(x));
        d[k] = a[k * n + k];
        if xnorm == 0.0 {
            e[k] = alpha;
            continue;
        }
        let beta = -alpha.hypot(xnorm).copysign(alpha);
        let tau = (beta - alpha) / beta;
        let inv = 1.0 / (alpha - beta);
        v[0] = 1.0;
        for i in 1..len {
            v[i] = col(&a, i) * inv;
        }
        e[k] = beta;

        let v = &v[..len];
        let p = &mut p[..len];
        p.fill(0.0);
        // p = tau * B v with B the trailing block, lower triangle only
        for i in 0..len {
            let row = &a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + k + 1 + i + 1];
            let (off, diag) = row.split_at(i);
            let vi = v[i];
            let mut dot = diag[0] * vi;
            for (pj, (&bij, &vj)) in p[..i].iter_mut().zip(off.iter().zip(&v[..i])) {
                dot += bij * vj;
                *pj += bij * vi;
            }
            p[i] += dot;
        }
        let mut pv = 0.0;
        for (pi, vi) in p.iter_mut().zip(v) {
            *pi *= tau;
            pv += *pi * vi;
        }
        // w = p - (tau/2)(p.v) v, stored in p
        let half = 0.5 * tau * pv;
        for (pi, vi) in p.iter_mut().zip(v) {
            *pi -= half * vi;
        }
        let w = &*p;
        for i in 0..len {
            let row = &mut a[(k + 1 + i) * n + k + 1..(k + 1 + i) * n + k + 1 + i + 1];
            let (vi, wi) = (v[i], w[i]);
            for (bij, (&vj, &wj)) in row.iter_mut().zip(v.iter().zip(w)) {
                *bij -= vi * wj + wi * vj;
            }
        }
    }
    if n >= 2 {
        d[n - 2] = a[(n - 2) * n + n - 2];
        e[n - 2] = a[(n - 1) * n + n - 2];
    }
    d[n - 1] = a[(n - 1) * n + n - 1];
    TridiagonalMatrix::new(d, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_goe, sample_wigner, EntryDistribution};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn tridiagonal_input_is_fixed_point() {
        let n = 6;
        let diag = [0.3, -1.2, 0.8, 2.0, -0.1, 0.5];
        let off = [0.7, -0.4, 1.1, 0.25, -0.9];
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            dense[i * n + i] = diag[i];
            if i + 1 < n {
                dense[i * n + i + 1] = off[i];
                dense[(i + 1) * n + i] = off[i];
            }
        }
        let t = tridiagonalize(&SymmetricMatrix::from_dense(n, &dense).unwrap()).unwrap();
        for i in 0..n {
            assert!((t.diag()[i] - diag[i]).abs() < 1e-14);
        }
        for i in 0..n - 1 {
            assert!((t.offdiag()[i].abs() - off[i].abs()).abs() < 1e-14);
        }
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        for (n, seed) in [(2, 1), (3, 2), (6, 3), (25, 4), (80, 5)] {
            let m = sample_goe(n, seed).unwrap();
            let t = tridiagonalize(&m).unwrap();
            let tr = m.trace();
            let scale = m.frobenius_sq().sqrt();
            assert!((t.trace() - tr).abs() <= 1e-12 * scale.max(tr.abs()), "n={n}");
            assert!(rel(t.frobenius_sq(), m.frobenius_sq()) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn frobenius_by_direct_recomputation_n6() {
        let m = sample_goe(6, 2024).unwrap();
        let t = tridiagonalize(&m).unwrap();
        let lhs: f64 = t.offdiag().iter().map(|x| 2.0 * x * x).sum::<f64>()
            + t.diag().iter().map(|x| x * x).sum::<f64>();
        let dense = m.to_dense();
        let rhs: f64 = dense.iter().map(|x| x * x).sum();
        assert!(rel(lhs, rhs) < 1e-12);
    }

    #[test]
    fn one_by_one() {
        let m = sample_wigner(1, EntryDistribution::Gaussian, 3).unwrap();
        let t = tridiagonalize(&m).unwrap();
        assert_eq!(t.diag(), &[m.get(0, 0)]);
        assert!(t.offdiag().is_empty());
    }
}
