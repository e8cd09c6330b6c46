//! Command-line front end for `tropjac-core`: flag parsing, JSON and CSV
//! rendering, and grid sweeps.

pub mod cli;
pub mod commands;
pub mod dto;
pub mod error;

pub use cli::Cli;
pub use commands::run;
pub use error::CliError;
