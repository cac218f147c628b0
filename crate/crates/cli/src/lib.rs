//! Experiment driver behind the `nimfa` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod manifest;

pub use commands::{run, Command, Overrides};
pub use config::ExperimentConfig;
pub use error::CliError;
pub use manifest::{verify_manifest, Manifest};
