//! Airy function `Ai` and its derivative on `[-12, 12]`.
//!
//! * `|t| <= 5`: Maclaurin series.
//! * `t > 5`: exponentially decaying asymptotic expansion.
//! * `t <= -9`: oscillatory asymptotic expansion.
//! * `-9 < t < -5`: Taylor-series integration of `y'' = t y` from the
//!   Maclaurin values at `t = -5`; the oscillatory expansion is not yet
//!   accurate to `1e-11` there.

use crate::error::{Error, Result};

pub const AIRY_MIN: f64 = -12.0;
pub const AIRY_MAX: f64 = 12.0;

/// `Ai(0)`
const AI0: f64 = 0.355_028_053_887_817_239_26;
/// `-Ai'(0)`
const AIP0: f64 = 0.258_819_403_792_806_798_41;

const MACLAURIN_LIMIT: f64 = 5.0;
const NEG_ASYMPTOTIC_LIMIT: f64 = -9.0;

/// `(Ai(t), Ai'(t))` with absolute error below `1e-11` on `[-12, 12]`.
pub fn airy(t: f64) -> Result<(f64, f64)> {
    if !(AIRY_MIN..=AIRY_MAX).contains(&t) {
        return Err(Error::Domain(format!(
            "airy supports [{AIRY_MIN}, {AIRY_MAX}], got {t}"
        )));
    }
    Ok(if t.abs() <= MACLAURIN_LIMIT {
        maclaurin(t)
    } else if t > 0.0 {
        asymptotic_positive(t)
    } else if t <= NEG_ASYMPTOTIC_LIMIT {
        asymptotic_negative(-t)
    } else {
        let (a, ap) = maclaurin(-MACLAURIN_LIMIT);
        taylor_march(-MACLAURIN_LIMIT, a, ap, t)
    })
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = sum 3^k (1/3)_k x^3k/(3k)!,  g = sum 3^k (2/3)_k x^(3k+1)/(3k+1)!
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tf, mut tg) = (1.0, x);
    let mut tfp = 0.5 * x * x; // term k = 1 of f'
    let mut tgp = 1.0;
    fp += tfp;
    for k in 1..200 {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= x3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tgp *= x3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        if k >= 2 {
            tfp *= x3 / ((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let small = |term: f64, sum: f64| term.abs() <= 1e-18 * sum.abs().max(1e-300);
        if small(tf, f) && small(tg, g) && small(tfp, fp) && small(tgp, gp) {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

/// Coefficients `u_k, v_k` of the Airy asymptotic expansions.
fn asymptotic_coefficients(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let next = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(next);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * next);
    }
    (u, v)
}

/// Sums `sum_k sign_k c_k / z^k` until the terms stop decreasing.
fn truncated_series(coef: impl Iterator<Item = f64>, z: f64) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut zk = 1.0;
    for c in coef {
        let term = c / zk;
        if term.abs() >= last {
            break;
        }
        sum += term;
        last = term.abs();
        if last < 1e-18 * sum.abs() {
            break;
        }
        zk *= z;
    }
    sum
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = asymptotic_coefficients(60);
    let alt = |c: &[f64]| {
        truncated_series(
            c.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c } else { -c }),
            zeta,
        )
    };
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let q = x.powf(0.25);
    (pre / q * alt(&u), -pre * q * alt(&v))
}

fn asymptotic_negative(x: f64) -> (f64, f64) {
    use std::f64::consts::{FRAC_PI_4, PI};
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let (u, v) = asymptotic_coefficients(80);
    // even / odd parts with alternating signs: sum (-1)^k c_{2k} / zeta^{2k}, ...
    let even = |c: &[f64]| {
        truncated_series(
            c.iter()
                .step_by(2)
                .enumerate()
                .map(|(k, &c)| if k % 2 == 0 { c } else { -c }),
            zeta * zeta,
        )
    };
    let odd = |c: &[f64]| {
        truncated_series(
            c.iter()
                .skip(1)
                .step_by(2)
                .enumerate()
                .map(|(k, &c)| if k % 2 == 0 { c } else { -c }),
            zeta * zeta,
        ) / zeta
    };
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let q = x.powf(0.25);
    let ai = (c * even(&u) + s * odd(&u)) / (PI.sqrt() * q);
    let aip = q * (s * even(&v) - c * odd(&v)) / PI.sqrt();
    (ai, aip)
}

/// Integrates `y'' = t y` from `(t0, y, y')` to `t1` by local Taylor series.
fn taylor_march(t0: f64, y0: f64, yp0: f64, t1: f64) -> (f64, f64) {
    let steps = ((t1 - t0).abs() / 0.25).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    let (mut t, mut y, mut yp) = (t0, y0, yp0);
    let mut a = [0.0f64; 48];
    for _ in 0..steps {
        a.fill(0.0);
        a[0] = y;
        a[1] = yp;
        // (j+2)(j+1) a_{j+2} = t a_j + a_{j-1}
        for j in 0..a.len() - 2 {
            let prev = if j > 0 { a[j - 1] } else { 0.0 };
            a[j + 2] = (t * a[j] + prev) / ((j + 1) as f64 * (j + 2) as f64);
        }
        let (mut val, mut der) = (0.0, 0.0);
        for j in (0..a.len()).rev() {
            val = val * h + a[j];
            if j > 0 {
                der = der * h + j as f64 * a[j];
            }
        }
        y = val;
        yp = der;
        t += h;
    }
    (y, yp)
}

#[cfg(test)]
mod tests {
    use super::*;

    // (t, Ai(t), Ai'(t)) to 20 significant digits
    const REFERENCE: [(f64, f64, f64); 19] = [
        (-12.0, -0.066555175054373129474, 1.0231104533679707299),
        (-10.0, 0.040241238486443190689, 0.9962650441327900559),
        (-9.0, -0.022133721547341403674, -0.97566398092633159471),
        (-8.5, -0.33029023763020887902, -0.032313348284639135873),
        (-7.0, 0.18428083525050563728, -0.77100816841012654773),
        (-6.0, -0.32914517362982310523, 0.34593548728134289493),
        (-5.5, 0.017781541276574975603, 0.86419721777139839077),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-3.0, -0.37881429367765807435, 0.31458376921659881365),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.5, 0.015725923380470489995, -0.026250881035903230365),
        (4.9, 0.00013599211701506742767, -0.00030761599633764950659),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (5.5, 0.000033685311908599814425, -0.00008046339130556514338),
        (7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
        (12.0, 1.393184688875360839e-13, -4.854736554985308463e-13),
    ];

    #[test]
    fn matches_reference_values() {
        for (t, ai, aip) in REFERENCE {
            let (a, ap) = airy(t).unwrap();
            assert!((a - ai).abs() < 1e-11, "Ai({t}) = {a}, want {ai}");
            assert!((ap - aip).abs() < 1e-11, "Ai'({t}) = {ap}, want {aip}");
        }
    }

    #[test]
    fn values_at_origin() {
        let (a, ap) = airy(0.0).unwrap();
        assert!((a - 0.355028053887817).abs() < 1e-11);
        assert!((ap + 0.258819403792807).abs() < 1e-11);
    }

    #[test]
    fn continuous_across_method_boundaries() {
        for b in [-9.0, -5.0, 5.0] {
            let (a1, p1) = airy(b - 1e-12).unwrap();
            let (a2, p2) = airy(b + 1e-12).unwrap();
            assert!((a1 - a2).abs() < 1e-10 && (p1 - p2).abs() < 1e-10, "at {b}");
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        // Richardson-extrapolated central second differences
        let d2 = |t: f64, h: f64| {
            let f = |x: f64| airy(x).unwrap().0;
            (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)
        };
        let h = 2e-3;
        let mut t = -11.9;
        while t < 11.9 {
            let (c, _) = airy(t).unwrap();
            let second = (4.0 * d2(t, h) - d2(t, 2.0 * h)) / 3.0;
            assert!((second - t * c).abs() < 1e-6, "t={t}: {}", second - t * c);
            t += 0.1;
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(airy(12.5).is_err());
        assert!(airy(-12.5).is_err());
    }
}
