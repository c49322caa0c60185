//! Command-line front end: propagate data, dump kernels, run the
//! verification suite. Everything is written as CSV.

pub mod config;
pub mod error;
pub mod io;
pub mod run;

pub use config::{Cli, Command};
pub use error::{CliError, Result};
pub use run::{run, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK};
