//! Command-line front end: equation parser, request execution and
//! structured reports.

pub mod args;
pub mod error;
pub mod parse;
pub mod run;

pub use args::{Cli, Command};
pub use error::{CliError, ErrorReport};
pub use parse::{parse_number, parse_poly};
pub use run::{render_human, render_json, run, Report, SCHEMA};
