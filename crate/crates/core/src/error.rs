use thiserror::Error;

use crate::table::CriticalValueTable;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A numeric argument lies outside the function's domain.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// Observation `index` (0-based, input order) is non-positive or non-finite.
    #[error("observation {index} is not a positive finite number: {value}")]
    Data { index: usize, value: f64 },

    #[error("sample size {n} is below the minimum of {min}")]
    TooSmall { n: usize, min: usize },

    #[error("degenerate data: {0}")]
    Degenerate(&'static str),

    #[error("cannot hold {requested} statistics in memory; use the chunked selection path")]
    Capacity { requested: u64 },

    #[error("embedded table integrity check failed: expected {expected}, found {found}")]
    Integrity { expected: String, found: String },

    #[error("table format error on line {line}: {msg}")]
    Format { line: usize, msg: String },

    /// Requested significance level is not a column of the table.
    #[error("significance level {0} is not tabulated")]
    Level(f64),

    #[error("sample size {n} is outside the tabulated range {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },

    #[error("interrupted")]
    Interrupted,

    /// Table generation stopped early; `partial` holds the rows completed so far.
    #[error("table build aborted at n={n}: {reason}")]
    Aborted {
        n: usize,
        reason: String,
        partial: Box<CriticalValueTable>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
