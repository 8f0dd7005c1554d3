//! Batch front end: specification files in, reports and plot-ready CSV out.

pub mod commands;
pub mod error;
pub mod locate;
pub mod output;
pub mod spec;

pub use commands::{run, Cli, Command, Outcome};
pub use error::{CliError, CliResult};
pub use spec::{parse_compound, parse_family, parse_input, parse_specs, SpecFile};
