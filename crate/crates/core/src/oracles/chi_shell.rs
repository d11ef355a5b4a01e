use statrs::function::gamma::{gamma_lr, gamma_ur};

use crate::ensembles::ShellSpec;
use crate::error::{Error, Result};

/// `P(lo <= X <= hi)` for `X = (1/4) chi^2_d`, i.e. the sum of `d` squared
/// `N(0, 1/4)` variables.
pub fn chi_range_probability(d: usize, lo: f64, hi: f64) -> Result<f64> {
    if d == 0 || !(lo >= 0.0) || !(hi >= lo) {
        return Err(Error::Domain(format!("need d >= 1 and 0 <= lo <= hi, got d={d} [{lo}, {hi}]")));
    }
    if hi == lo {
        return Ok(0.0);
    }
    // chi^2_d CDF at 4x is P(d/2, 2x)
    let a = d as f64 / 2.0;
    let (xl, xh) = (2.0 * lo, 2.0 * hi);
    let p = if xl >= a {
        // both in the upper tail: difference of complements keeps precision
        gamma_ur(a, xl) - if xh.is_finite() { gamma_ur(a, xh) } else { 0.0 }
    } else {
        let upper = if xh.is_finite() { gamma_lr(a, xh) } else { 1.0 };
        upper - if xl > 0.0 { gamma_lr(a, xl) } else { 0.0 }
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Probability that i.i.d. `N(0, 1/4)` raw entries land in `shell`.
pub fn chi_shell_probability(n: usize, shell: ShellSpec) -> Result<f64> {
    let (lo, hi) = shell.bounds(n)?;
    chi_range_probability(ShellSpec::dimension(n), lo, hi)
}
