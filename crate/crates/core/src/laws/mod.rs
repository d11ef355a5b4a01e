//! Reference laws in the normalization where the spectrum fills `[-1, 1]`.

mod airy;
mod kernels;
mod painleve;
mod reference;
mod scales;
mod semicircle;

pub use airy::{airy, AIRY_MAX, AIRY_MIN};
pub use kernels::{
    edge_measure_density, joint_logdensity, joint_logdensity_gradient, r_k_det, sinc_pi,
    sine_kernel, MAX_CORRELATION_ORDER,
};
pub use painleve::{
    default_solution, hastings_mcleod, tw2_cdf, PainleveSolution, DEFAULT_T_MAX, DEFAULT_T_MIN,
    DEFAULT_TOL,
};
pub use reference::{std_normal_cdf, ReferenceCdf};
pub use scales::{bulk_sigma, edge_center_scale, BULK_LIMIT};
pub use semicircle::{
    classical_location, expected_count, semicircle_cdf, semicircle_density, semicircle_quantile,
};
