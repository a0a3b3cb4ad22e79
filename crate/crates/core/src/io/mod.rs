//! Command-line driver, CSV and JSON serialization, and SVG figures.

pub mod config;
pub mod csv;
pub mod figures;
pub mod json;
pub mod run;
pub mod svg;

pub use config::{parse_cli, Command, RunConfig};
pub use run::execute;
