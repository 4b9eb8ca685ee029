//! Pipeline driver behind the `ridgeflow` binary: configuration, file
//! formats, overlay rendering and the end-to-end run.

pub mod config;
pub mod error;
pub mod io;
pub mod overlay;
pub mod pipeline;
pub mod report;

pub use error::{CliError, CliResult};
pub use pipeline::{run_pipeline, RunOptions, ARTIFACTS};
pub use report::PipelineReport;
