//! Independent reference computations. Nothing here calls into `laws` or
//! `spectra`; quadrature and special functions are implemented separately.

mod chi_shell;
mod fredholm;
mod quadrature;
mod smalln;

pub use chi_shell::{chi_range_probability, chi_shell_probability};
pub use fredholm::{
    airy_kernel_fredholm_tw2, fredholm_self_convergence, ContourAiry, FREDHOLM_LENGTH, MAX_ORDER,
    MIN_ORDER, SELF_CONVERGENCE_TOL,
};
pub use quadrature::{composite, gauss_legendre};
pub use smalln::{smalln_event_probability, EigenEvent, SMALLN_HALF_WIDTH};
