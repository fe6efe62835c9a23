//! Critical-value tables: in-memory form, the line-oriented file format,
//! and the embedded reference table.
//!
//! File format (UTF-8, one record per line):
//!
//! ```text
//! bsppcc-table v1 I=<int> seed=<int> alpha_gen=<float> levels=<γ1,γ2,...>
//! <n> <r_γ1> <r_γ2> ... <r_γk>
//! ```
//!
//! Values carry 6 decimals. Lines starting with `#` are comments. The header
//! may end with `source=<tag>` and `generator=<tag>`; `seed` and `alpha_gen`
//! may be `-` when unknown.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "bsppcc-table v1";

/// The twelve significance levels of the reference table.
pub const PAPER_LEVELS: [f64; 12] = [
    0.005, 0.01, 0.02, 0.025, 0.05, 0.075, 0.10, 0.125, 0.15, 0.20, 0.25, 0.50,
];

const PAPER_TABLE_TEXT: &str = include_str!("../data/paper_tables.txt");
const PAPER_TABLE_SHA256: &str = "1d76846147fdd6aef03c6e25866422dc2a3f0abf5dc702c71f57f4fedc634107";
const PAPER_ITERATIONS: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableSource {
    Paper,
    MonteCarlo,
}

impl TableSource {
    fn tag(self) -> &'static str {
        match self {
            TableSource::Paper => "paper",
            TableSource::MonteCarlo => "monte-carlo",
        }
    }

    fn from_tag(s: &str) -> Option<Self> {
        match s {
            "paper" => Some(TableSource::Paper),
            "monte-carlo" => Some(TableSource::MonteCarlo),
            _ => None,
        }
    }
}

/// How a table was produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableMeta {
    pub iterations: u64,
    pub seed: Option<u64>,
    pub alpha_gen: Option<f64>,
    pub source: TableSource,
    pub generator: String,
}

impl TableMeta {
    /// Short provenance string, e.g. `paper, I=100000000`.
    pub fn provenance(&self) -> String {
        let mut s = format!("{}, I={}", self.source.tag(), self.iterations);
        if let Some(seed) = self.seed {
            let _ = write!(s, ", seed={seed}");
        }
        if let Some(a) = self.alpha_gen {
            let _ = write!(s, ", alpha_gen={a}");
        }
        s
    }
}

/// Mapping `(n, γ) -> r_γ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValueTable {
    levels: Vec<f64>,
    rows: BTreeMap<usize, Vec<f64>>,
    meta: TableMeta,
}

pub(crate) fn validate_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Argument(
            "at least one significance level is required".into(),
        ));
    }
    if let Some(&bad) = levels.iter().find(|&&g| !(g > 0.0 && g < 1.0)) {
        return Err(Error::Argument(format!(
            "significance level {bad} not in (0, 1)"
        )));
    }
    if levels
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::Argument(
            "significance levels must be strictly increasing".into(),
        ));
    }
    Ok(())
}

impl CriticalValueTable {
    pub fn new(levels: Vec<f64>, meta: TableMeta) -> Result<Self> {
        validate_levels(&levels)?;
        Ok(Self {
            levels,
            rows: BTreeMap::new(),
            meta,
        })
    }

    /// Adds or replaces the row for `n`. Values must lie in (-1, 1) and be
    /// non-decreasing across levels.
    pub fn insert_row(&mut self, n: usize, values: Vec<f64>) -> Result<()> {
        if n < crate::plot::MIN_SAMPLE_SIZE {
            return Err(Error::TooSmall {
                n,
                min: crate::plot::MIN_SAMPLE_SIZE,
            });
        }
        if values.len() != self.levels.len() {
            return Err(Error::Argument(format!(
                "row n={n} has {} values, table has {} levels",
                values.len(),
                self.levels.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&r| !(r > -1.0 && r < 1.0)) {
            return Err(Error::Argument(format!(
                "row n={n}: critical value {bad} not in (-1, 1)"
            )));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Argument(format!(
                "row n={n}: critical values decrease across levels"
            )));
        }
        self.rows.insert(n, values);
        Ok(())
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }

    pub fn row(&self, n: usize) -> Option<&[f64]> {
        self.rows.get(&n).map(Vec::as_slice)
    }

    /// Rows in increasing n.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[f64])> {
        self.rows.iter().map(|(&n, v)| (n, v.as_slice()))
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Smallest and largest tabulated n.
    pub fn n_range(&self) -> Option<(usize, usize)> {
        Some((*self.rows.keys().next()?, *self.rows.keys().next_back()?))
    }

    /// Column index of `gamma`, matched to within 1e-12.
    pub fn level_index(&self, gamma: f64) -> Option<usize> {
        self.levels.iter().position(|&g| (g - gamma).abs() <= 1e-12)
    }

    /// Single critical value for a tabulated `(n, γ)`.
    pub fn get(&self, n: usize, gamma: f64) -> Option<f64> {
        Some(self.row(n)?[self.level_index(gamma)?])
    }

    /// Serializes to the text file format.
    pub fn to_text(&self) -> String {
        let mut out = format_header(&self.meta, &self.levels);
        for (n, values) in self.rows() {
            out.push_str(&format_row(n, values));
        }
        out
    }

    /// Strict parser for the text file format.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut table: Option<CriticalValueTable> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fail = |msg: String| Error::Format { line: line_no, msg };
            match table.as_mut() {
                None => table = Some(parse_header(line).map_err(fail)?),
                Some(t) => {
                    let mut tokens = line.split_whitespace();
                    let n: usize = tokens
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| fail("row must start with an integer n".into()))?;
                    let values = tokens
                        .map(|s| s.parse::<f64>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| fail(format!("bad value: {e}")))?;
                    if values.len() != t.levels.len() {
                        return Err(fail(format!(
                            "expected {} values, found {}",
                            t.levels.len(),
                            values.len()
                        )));
                    }
                    if t.rows.contains_key(&n) {
                        return Err(fail(format!("duplicate row n={n}")));
                    }
                    t.insert_row(n, values).map_err(|e| fail(e.to_string()))?;
                }
            }
        }
        table.ok_or(Error::Format {
            line: 0,
            msg: "missing header".into(),
        })
    }
}

/// Header line (with trailing newline) for a table file.
pub fn format_header(meta: &TableMeta, levels: &[f64]) -> String {
    let seed = meta.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
    let alpha = meta
        .alpha_gen
        .map_or_else(|| "-".to_string(), |a| a.to_string());
    let levels = levels
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{FORMAT_TAG} I={} seed={seed} alpha_gen={alpha} levels={levels} source={} generator={}\n",
        meta.iterations,
        meta.source.tag(),
        meta.generator
    )
}

/// One data line (with trailing newline).
pub fn format_row(n: usize, values: &[f64]) -> String {
    let mut line = n.to_string();
    for v in values {
        let _ = write!(line, " {v:.6}");
    }
    line.push('\n');
    line
}

fn parse_header(line: &str) -> std::result::Result<CriticalValueTable, String> {
    let rest = line
        .strip_prefix(FORMAT_TAG)
        .ok_or_else(|| format!("header must start with `{FORMAT_TAG}`"))?;
    let mut fields = rest.split_whitespace();
    let mut take = |key: &str| -> std::result::Result<&str, String> {
        let tok = fields.next().ok_or_else(|| format!("missing `{key}=`"))?;
        tok.strip_prefix(key)
            .and_then(|t| t.strip_prefix('='))
            .ok_or_else(|| format!("expected `{key}=`, found `{tok}`"))
    };
    let iterations: u64 = take("I")?.parse().map_err(|e| format!("bad I: {e}"))?;
    let seed = match take("seed")? {
        "-" => None,
        s => Some(s.parse::<u64>().map_err(|e| format!("bad seed: {e}"))?),
    };
    let alpha_gen = match take("alpha_gen")? {
        "-" => None,
        s => Some(
            s.parse::<f64>()
                .map_err(|e| format!("bad alpha_gen: {e}"))?,
        ),
    };
    let levels = take("levels")?
        .split(',')
        .map(|s| {
            s.parse::<f64>()
                .map_err(|e| format!("bad level `{s}`: {e}"))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    validate_levels(&levels).map_err(|e| e.to_string())?;

    let mut meta = TableMeta {
        iterations,
        seed,
        alpha_gen,
        source: TableSource::MonteCarlo,
        generator: "unknown".into(),
    };
    for tok in fields {
        match tok.split_once('=') {
            Some(("source", v)) => {
                meta.source =
                    TableSource::from_tag(v).ok_or_else(|| format!("unknown source `{v}`"))?
            }
            Some(("generator", v)) => meta.generator = v.to_string(),
            _ => return Err(format!("unexpected header field `{tok}`")),
        }
    }
    CriticalValueTable::new(levels, meta).map_err(|e| e.to_string())
}

/// The embedded reference table (values stored as `r`, not `100 r`).
///
/// The asset is checksummed; a mismatch yields [`Error::Integrity`].
pub fn paper_table() -> Result<CriticalValueTable> {
    parse_reference(PAPER_TABLE_TEXT, PAPER_TABLE_SHA256)
}

fn parse_reference(text: &str, expected_sha: &str) -> Result<CriticalValueTable> {
    let found = hex::encode(Sha256::digest(text.as_bytes()));
    if found != expected_sha {
        return Err(Error::Integrity {
            expected: expected_sha.to_string(),
            found,
        });
    }
    let meta = TableMeta {
        iterations: PAPER_ITERATIONS,
        seed: None,
        alpha_gen: None,
        source: TableSource::Paper,
        generator: "reference".into(),
    };
    let mut table = CriticalValueTable::new(PAPER_LEVELS.to_vec(), meta)?;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fail = |msg: &str| Error::Format {
            line: idx + 1,
            msg: msg.to_string(),
        };
        let mut tokens = line.split_whitespace();
        let n: usize = tokens
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| fail("bad n"))?;
        let values = tokens
            .map(|s| s.parse::<f64>().map(percent_to_unit))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| fail("bad value"))?;
        table.insert_row(n, values)?;
    }
    Ok(table)
}

/// `72.08` -> `0.7208`, rounded to the nearest double of the decimal value.
fn percent_to_unit(pct: f64) -> f64 {
    // Reference values carry two decimals, so this is an integer number of 1e-4 units.
    (pct * 100.0).round() / 10_000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_spot_values() {
        let t = paper_table().unwrap();
        assert_eq!(t.get(46, 0.005), Some(0.9639));
        assert_eq!(t.get(46, 0.50), Some(0.9920));
        assert_eq!(t.get(110, 0.25), Some(0.9935));
        assert_eq!(t.get(3, 0.005), Some(0.7208));
        assert_eq!(t.get(1000, 0.5), Some(0.9992));
        assert_eq!(t.meta().provenance(), "paper, I=100000000");
    }

    #[test]
    fn reference_row_layout() {
        let t = paper_table().unwrap();
        let sizes = t.sizes();
        let expected: Vec<usize> = (3..=50)
            .chain((55..=100).step_by(5))
            .chain((110..=500).step_by(10))
            .chain((550..=1000).step_by(50))
            .collect();
        assert_eq!(sizes, expected);
        assert_eq!(t.levels(), &PAPER_LEVELS);
    }

    #[test]
    fn tampered_asset_fails_integrity() {
        let tampered = PAPER_TABLE_TEXT.replace("72.08", "72.09");
        assert!(matches!(
            parse_reference(&tampered, PAPER_TABLE_SHA256),
            Err(Error::Integrity { .. })
        ));
    }

    #[test]
    fn text_round_trip_is_byte_identical() {
        let t = paper_table().unwrap();
        let text = t.to_text();
        let back = CriticalValueTable::from_text(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn header_format() {
        let meta = TableMeta {
            iterations: 1000,
            seed: Some(7),
            alpha_gen: Some(1.0),
            source: TableSource::MonteCarlo,
            generator: "x".into(),
        };
        assert_eq!(
            format_header(&meta, &[0.05, 0.5]),
            "bsppcc-table v1 I=1000 seed=7 alpha_gen=1 levels=0.05,0.5 source=monte-carlo generator=x\n"
        );
        assert_eq!(format_row(46, &[0.97842, 0.992]), "46 0.978420 0.992000\n");
    }

    #[test]
    fn minimal_header_is_accepted() {
        let t = CriticalValueTable::from_text(
            "# comment\nbsppcc-table v1 I=1000 seed=1 alpha_gen=0.5 levels=0.1,0.5\n5 0.9 0.95\n# partial\n",
        )
        .unwrap();
        assert_eq!(t.meta().seed, Some(1));
        assert_eq!(t.meta().alpha_gen, Some(0.5));
        assert_eq!(t.get(5, 0.1), Some(0.9));
    }

    #[test]
    fn strict_parse_errors() {
        let h = "bsppcc-table v1 I=1000 seed=1 alpha_gen=1 levels=0.1,0.5\n";
        let cases = [
            (format!("{h}5 0.9\n"), 2),
            (format!("{h}5 0.9 0.95 0.99\n"), 2),
            (format!("{h}5 0.9 abc\n"), 2),
            (format!("{h}5 0.95 0.9\n"), 2),
            (format!("{h}5 0.9 0.95\n5 0.9 0.95\n"), 3),
            (
                "bsppcc-table v1 I=1000 seed=1 alpha_gen=1 levels=0.5,0.1\n".to_string(),
                1,
            ),
            (
                "bsppcc-table v2 I=1000 seed=1 alpha_gen=1 levels=0.1\n".to_string(),
                1,
            ),
            (
                "bsppcc-table v1 I=1000 alpha_gen=1 levels=0.1\n".to_string(),
                1,
            ),
            (
                "bsppcc-table v1 I=1000 seed=1 alpha_gen=1 levels=0.1 color=red\n".to_string(),
                1,
            ),
        ];
        for (text, line) in cases {
            match CriticalValueTable::from_text(&text) {
                Err(Error::Format { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("expected format error for {text:?}, got {other:?}"),
            }
        }
        assert!(CriticalValueTable::from_text("# only comments\n").is_err());
    }
}
