//! Data files: numbers separated by whitespace and/or commas, `#` to end of
//! line is a comment, blank lines are ignored.

use std::path::Path;

use bsppcc::Sample64;

use crate::error::CliError;

const MIN_OBSERVATIONS: usize = 3;

pub fn read_sample(path: &Path) -> Result<Sample64, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_sample(&text)
}

pub fn parse_sample(text: &str) -> Result<Sample64, CliError> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        for token in content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let value: f64 = token.parse().map_err(|_| CliError::Parse {
                line,
                token: token.to_string(),
            })?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(CliError::NonPositive { line, value });
            }
            values.push(value);
        }
    }
    if values.len() < MIN_OBSERVATIONS {
        return Err(CliError::TooFew(values.len()));
    }
    Ok(Sample64::new(values)?)
}
