//! Hastings–McLeod solution of `u'' = t u + 2 u^3` and the GUE Tracy–Widom
//! distribution built from it.

use std::sync::OnceLock;

use super::airy::airy;
use crate::error::{Error, Result};

pub const DEFAULT_T_MIN: f64 = -10.0;
pub const DEFAULT_T_MAX: f64 = 8.0;
pub const DEFAULT_TOL: f64 = 1e-10;

/// Step cap keeping cubic Hermite interpolation error near `1e-10`.
const MAX_STEP: f64 = 0.005;
const MIN_STEP: f64 = 1e-12;
/// Classification runs continue this far below `t_min` so that neighbouring
/// trajectories have clearly separated before they are compared.
const CLASSIFY_OVERSHOOT: f64 = 2.0;
const BISECTION_STEPS: usize = 80;
const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Fate {
    /// Above the separatrix (eventual blow-up).
    Over,
    /// Below the separatrix (crosses zero and oscillates).
    Under,
}

struct Trajectory {
    t: Vec<f64>,
    u: Vec<f64>,
    up: Vec<f64>,
    fate: Option<Fate>,
}

fn rhs(t: f64, y: [f64; 2]) -> [f64; 2] {
    [y[1], t * y[0] + 2.0 * y[0] * y[0] * y[0]]
}

/// Left asymptote `sqrt(-t/2) (1 + 1/(8 t^3))`.
fn left_asymptote(t: f64) -> f64 {
    (-t / 2.0).sqrt() * (1.0 + 1.0 / (8.0 * t * t * t))
}

/// Dormand–Prince 5(4) from `t_start` down to `t_end` with per-step error
/// `<= tol (1 + |y|)`. Stops early once the fate of the trajectory is clear.
fn integrate(t_start: f64, y0: [f64; 2], t_end: f64, tol: f64, record: bool) -> Result<Trajectory> {
    const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];

    let mut tr = Trajectory { t: vec![t_start], u: vec![y0[0]], up: vec![y0[1]], fate: None };
    let (mut t, mut y) = (t_start, y0);
    let mut h = -MAX_STEP;
    let mut k = [[0.0f64; 2]; 7];
    k[0] = rhs(t, y);
    while t > t_end {
        if t + h < t_end {
            h = t_end - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys[0] += h * A[s - 1][j] * kj[0];
                ys[1] += h * A[s - 1][j] * kj[1];
            }
            k[s] = rhs(t + C[s - 1] * h, ys);
        }
        let mut ynew = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            ynew[0] += h * A[5][j] * kj[0];
            ynew[1] += h * A[5][j] * kj[1];
        }
        let mut err = 0.0f64;
        for c in 0..2 {
            let e: f64 = (0..7).map(|j| E[j] * k[j][c]).sum::<f64>() * h;
            err = err.max(e.abs() / (tol * (1.0 + y[c].abs().max(ynew[c].abs()))));
        }
        if !err.is_finite() || err > 1.0 {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.5);
            if !h.is_finite() || h.abs() < MIN_STEP {
                if record {
                    return Err(Error::Numeric(format!(
                        "Painleve integration step underflow at t = {t:.6} (blow-up)"
                    )));
                }
                tr.fate = Some(Fate::Over);
                return Ok(tr);
            }
            continue;
        }
        t += h;
        y = ynew;
        k[0] = k[6];
        if record {
            tr.t.push(t);
            tr.u.push(y[0]);
            tr.up.push(y[1]);
        }
        if t < 0.0 {
            if y[0] < 0.0 {
                tr.fate = Some(Fate::Under);
            } else if y[0] > 4.0 * (1.0 + (-t / 2.0).sqrt()) {
                tr.fate = Some(Fate::Over);
            }
            if tr.fate.is_some() && !record {
                return Ok(tr);
            }
        }
        let grow = if err > 0.0 { (0.9 * err.powf(-0.2)).min(5.0) } else { 5.0 };
        h = (h * grow).max(-MAX_STEP);
    }
    if !record {
        tr.t.push(t);
        tr.u.push(y[0]);
        tr.up.push(y[1]);
    }
    Ok(tr)
}

/// Hastings–McLeod solution sampled on a descending grid from `t_max` to
/// `t_min`, with cubic Hermite interpolation in between.
#[derive(Debug, Clone)]
pub struct PainleveSolution {
    grid: Vec<f64>,
    u: Vec<f64>,
    u_prime: Vec<f64>,
    /// Relative correction `s` in `u'(t_max) = (1 + s) Ai'(t_max)`.
    slope_correction: f64,
    tol: f64,
}

/// Integrates the Hastings–McLeod solution from `t_max` down to `t_min`.
///
/// The boundary value is `u(t_max) = Ai(t_max)`. The slope is
/// `(1 + s) Ai'(t_max)` with `s` found by bisection between trajectories
/// that blow up and trajectories that cross zero, which keeps the
/// numerical solution on the separatrix all the way to `t_min`.
pub fn hastings_mcleod(t_min: f64, t_max: f64, tol: f64) -> Result<PainleveSolution> {
    if !(t_min < -2.0 && t_max > 2.0 && t_max <= 10.0) {
        return Err(Error::Domain(format!(
            "hastings_mcleod needs t_min < -2 < 2 < t_max <= 10, got [{t_min}, {t_max}]"
        )));
    }
    if !(tol > 0.0 && tol < 1e-3) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1e-3), got {tol}")));
    }
    let (ai, aip) = airy(t_max)?;
    let t_stop = t_min - CLASSIFY_OVERSHOOT;
    let fate = |s: f64| -> Result<Fate> {
        let tr = integrate(t_max, [ai, (1.0 + s) * aip], t_stop, tol, false)?;
        Ok(tr.fate.unwrap_or_else(|| {
            if tr.u[tr.u.len() - 1] > left_asymptote(t_stop) {
                Fate::Over
            } else {
                Fate::Under
            }
        }))
    };

    // u'(t_max) < 0; a larger s gives a steeper slope and a larger amplitude
    let (mut lo, mut hi) = (-1e-2, 1e-2);
    if fate(lo)? != Fate::Under || fate(hi)? != Fate::Over {
        return Err(Error::Numeric("could not bracket the Hastings-McLeod separatrix".into()));
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        match fate(mid)? {
            Fate::Under => lo = mid,
            Fate::Over => hi = mid,
        }
    }
    let s = 0.5 * (lo + hi);
    let tr = integrate(t_max, [ai, (1.0 + s) * aip], t_min, tol, true)?;
    if tr.fate.is_some() || tr.u.iter().any(|&u| !(u > 0.0)) {
        return Err(Error::Numeric("Hastings-McLeod trajectory left the separatrix".into()));
    }
    Ok(PainleveSolution { grid: tr.t, u: tr.u, u_prime: tr.up, slope_correction: s, tol })
}

impl PainleveSolution {
    /// Descending grid, `grid[0] = t_max`.
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn u_prime(&self) -> &[f64] {
        &self.u_prime
    }

    pub fn t_max(&self) -> f64 {
        self.grid[0]
    }

    pub fn t_min(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn slope_correction(&self) -> f64 {
        self.slope_correction
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `(u(t), u'(t))` by cubic Hermite interpolation.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if !(t >= self.t_min() && t <= self.t_max()) {
            return Err(Error::Domain(format!(
                "t = {t} outside the solution range [{}, {}]",
                self.t_min(),
                self.t_max()
            )));
        }
        // grid is descending: find i with grid[i] >= t >= grid[i+1]
        let i = self.grid.partition_point(|&g| g > t).saturating_sub(1).min(self.grid.len() - 2);
        let (t0, t1) = (self.grid[i], self.grid[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (y0, y1) = (self.u[i], self.u[i + 1]);
        let (d0, d1) = (self.u_prime[i] * h, self.u_prime[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let val = (2.0 * s3 - 3.0 * s2 + 1.0) * y0
            + (s3 - 2.0 * s2 + s) * d0
            + (-2.0 * s3 + 3.0 * s2) * y1
            + (s3 - s2) * d1;
        let der = ((6.0 * s2 - 6.0 * s) * y0
            + (3.0 * s2 - 4.0 * s + 1.0) * d0
            + (-6.0 * s2 + 6.0 * s) * y1
            + (3.0 * s2 - 2.0 * s) * d1)
            / h;
        Ok((val, der))
    }

    /// `F_2(x) = exp(-int_x^inf (t - x) u(t)^2 dt)` for `x` in
    /// `[t_min, t_max]`. The part beyond `t_max` uses `u = Ai` in closed form.
    pub fn tw2_cdf(&self, x: f64) -> Result<f64> {
        let t_max = self.t_max();
        if !(x >= self.t_min() && x <= t_max) {
            return Err(Error::Domain(format!(
                "tw2_cdf supports [{}, {}], got {x}",
                self.t_min(),
                t_max
            )));
        }
        let f = |t: f64| {
            let u = self.eval(t).map(|v| v.0).unwrap_or(0.0);
            (t - x) * u * u
        };
        let inner = if x < t_max { adaptive_simpson(&f, x, t_max, QUADRATURE_TOL) } else { 0.0 };
        // int_s^inf Ai^2 = Ai'^2 - s Ai^2,
        // int_s^inf t Ai^2 = (s Ai'^2 - s^2 Ai^2 - Ai Ai') / 3
        let (a, ap) = airy(t_max)?;
        let s = t_max;
        let first = (s * ap * ap - s * s * a * a - a * ap) / 3.0;
        let zeroth = ap * ap - s * a * a;
        let tail = first - x * zeroth;
        Ok((-(inner + tail)).exp().clamp(0.0, 1.0))
    }
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let diff = left + right - whole;
        if depth == 0 || diff.abs() <= 15.0 * tol {
            return left + right + diff / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    // split into unit panels first so narrow features are not skipped
    let panels = ((b - a).ceil() as usize).max(1);
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * w, a + (i + 1) as f64 * w);
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            rec(f, lo, hi, fa, fm, fb, whole, tol / panels as f64, 40)
        })
        .sum()
}

static DEFAULT_SOLUTION: OnceLock<std::result::Result<PainleveSolution, Error>> = OnceLock::new();

/// The Hastings–McLeod solution on `[-10, 8]` with tolerance `1e-10`,
/// computed once per process.
pub fn default_solution() -> Result<&'static PainleveSolution> {
    DEFAULT_SOLUTION
        .get_or_init(|| hastings_mcleod(DEFAULT_T_MIN, DEFAULT_T_MAX, DEFAULT_TOL))
        .as_ref()
        .map_err(Clone::clone)
}

/// GUE Tracy–Widom distribution function on `[-10, 8]`.
pub fn tw2_cdf(x: f64) -> Result<f64> {
    default_solution()?.tw2_cdf(x)
}
