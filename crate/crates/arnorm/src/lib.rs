//! File formats, law descriptors, parallel execution and the command-line
//! frontend on top of [`arnorm_core`].

pub mod commands;
pub mod config;
pub mod descriptor;
pub mod error;
pub mod exec;
pub mod report;
pub mod series_file;
pub mod student;
pub mod table_file;

pub use error::{CliError, ExitCode};
pub use exec::RayonExecutor;

/// Crate version recorded in every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
