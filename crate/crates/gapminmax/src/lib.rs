//! Batch front end for `gapminmax-core`: JSON experiment configs, parallel
//! runs over grids and seeds, CSV/JSON reports.

pub mod config;
pub mod error;
pub mod matrix_file;
pub mod report;
pub mod run;

pub use gapminmax_core as core;

pub use config::{ExperimentConfig, Format, ModelConfig};
pub use error::{Error, Result};
pub use report::ReportRow;
