//! Files, tables, drawings and the command-line front end for `smallgon-core`.

pub mod cli;
pub mod error;
pub mod files;
pub mod json;
pub mod svg;
pub mod tables;
pub mod verify;

pub use cli::run;
pub use error::{CliError, EXIT_CHECK, EXIT_OK, EXIT_USAGE};
