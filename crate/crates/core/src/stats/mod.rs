//! Estimators and tests that turn spectra into checkable statistics.

mod edge;
mod estimators;
mod ks;
mod pair;

pub use edge::{edge_histogram, edge_measure, edge_measure_cdf, EdgeHistogram, EdgeMeasure};
pub use estimators::{
    counting_statistic, default_trace_power, gap_correlation, gap_indices, interval_probability,
    mean_estimate, neumaier_sum, normalize_bulk, normalize_bulk_value, pearson, rescale_edge,
    trace_moment, MeanEstimate, ProportionEstimate, MIN_GAP_SPECTRA,
};
pub use ks::{kolmogorov_survival, ks_one_sample, ks_one_sample_with, ks_two_sample, KsResult};
pub use pair::{
    pair_correlation, CorrelationEstimate, MAX_HALF_WIDTH, MIN_BIN_PAIRS, MIN_PAIR_SPECTRA,
};
