//! Command-line front end: state parsing, run orchestration, CSV/JSON output.

pub mod commands;
pub mod error;
pub mod output;
pub mod state_spec;
pub mod verify;

pub use commands::{execute, Cli};
pub use error::{exit, CliError, CliResult};
