//! Command-line front end for the `bsppcc` goodness-of-fit test.

pub mod commands;
pub mod error;
pub mod input;
pub mod options;

pub use commands::run;
pub use error::CliError;
pub use input::{parse_sample, read_sample};
pub use options::{Command, Format, RunOptions};

/// Environment variable naming a default critical-value table file.
pub const TABLE_ENV: &str = "BSPPCC_TABLE";
