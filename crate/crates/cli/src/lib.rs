//! Command-line front end for `debranges-core`: JSON and CSV formats, the
//! command implementations and the acceptance suite behind `selftest`.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod report;

pub use commands::{execute, run, Outcome};
pub use config::{Command, RunConfig};
pub use error::{CliError, ExitStatus};
pub use report::{Check, Report};
