//! Experiment configuration, seeded parallel replication, reports and
//! their on-disk artifacts.

mod config;
mod emit;
mod report;
mod run;

pub use config::{parse_config_file, ExperimentConfig, ExperimentKind};
pub use emit::{emit, Format, MANIFEST_NAME, OUT_DIR_ENV};
pub use report::{Check, Comparison, Estimate, Metadata, PlotTable, Report, Row, Summary};
pub use run::{
    run_experiment, sample_spectrum, trace_moment_limit, SampledSpectrum, INVARIANT_TOL,
    MAX_FAILED_FRACTION,
};
