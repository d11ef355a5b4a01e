//! Random-matrix universality laboratory.

pub mod ensembles;
pub mod harness;
pub mod error;
pub mod laws;
pub mod oracles;
pub mod seed;
pub mod spectra;
pub mod stats;

pub use error::{Error, Result};
