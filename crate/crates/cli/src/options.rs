use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

/// Birnbaum-Saunders probability-plot correlation test.
#[derive(Debug, Parser)]
#[command(name = "bsppcc", version, about)]
pub struct RunOptions {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a sample against the Birnbaum-Saunders family.
    Test {
        /// Observations separated by whitespace or commas; `#` starts a comment.
        #[arg(long)]
        data: PathBuf,
        /// Significance levels to decide at (default: every tabulated level).
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
        /// Critical-value table file (default: $BSPPCC_TABLE, then the built-in table).
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write the linearized probability plot.
    Plot {
        #[arg(long)]
        data: PathBuf,
        /// Output prefix; writes `<prefix>.csv` and optionally `<prefix>.svg`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: bool,
    },
    /// Build a critical-value table by Monte Carlo.
    GenTable {
        #[arg(long)]
        n_from: usize,
        #[arg(long)]
        n_to: usize,
        #[arg(long, default_value_t = 1)]
        n_step: usize,
        #[arg(long)]
        iterations: u64,
        #[arg(long)]
        seed: u64,
        /// Shape of the generating distribution.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a table, or the row for one sample size.
    ShowTable {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}
