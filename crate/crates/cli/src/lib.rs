//! Configuration, reports and the end-to-end pipeline behind the `kni` binary.

pub mod config;
pub mod pipeline;
pub mod report;

pub use config::{Config, Source};
pub use pipeline::{run_pipeline, ExitStatus, Outcome};
pub use report::{Report, Section};
