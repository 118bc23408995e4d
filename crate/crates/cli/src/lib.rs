//! Command-line front end: scenario files, sweeps and figure presets.

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod run;

pub use error::CliError;
