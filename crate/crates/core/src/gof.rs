//! The goodness-of-fit test: critical-value lookup, decisions and p-values.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::plot::{bs_plot_statistic, MIN_SAMPLE_SIZE};
use crate::real::Real;
use crate::sample::Sample;
use crate::table::{CriticalValueTable, TableMeta};

/// Critical values of every level for sample size `n`, interpolated linearly
/// in n between the bracketing rows when n is not tabulated.
pub fn critical_row(table: &CriticalValueTable, n: usize) -> Result<Vec<f64>> {
    if n < MIN_SAMPLE_SIZE {
        return Err(Error::TooSmall {
            n,
            min: MIN_SAMPLE_SIZE,
        });
    }
    let (min, max) = table
        .n_range()
        .ok_or(Error::OutOfRange { n, min: 0, max: 0 })?;
    if n < min || n > max {
        return Err(Error::OutOfRange { n, min, max });
    }
    if let Some(row) = table.row(n) {
        return Ok(row.to_vec());
    }
    let (lo_n, lo) = table
        .rows()
        .take_while(|(m, _)| *m < n)
        .last()
        .expect("n > min");
    let (hi_n, hi) = table.rows().find(|(m, _)| *m > n).expect("n < max");
    let w = (n - lo_n) as f64 / (hi_n - lo_n) as f64;
    Ok(lo.iter().zip(hi).map(|(a, b)| a + w * (b - a)).collect())
}

/// `r_γ` for sample size `n`; `gamma` must be one of the table's levels.
pub fn lookup_critical(table: &CriticalValueTable, n: usize, gamma: f64) -> Result<f64> {
    let idx = table.level_index(gamma).ok_or(Error::Level(gamma))?;
    Ok(critical_row(table, n)?[idx])
}

/// A p-value read off a table: either an interpolated estimate or a bound
/// outside the tabulated levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PValue {
    Estimate(f64),
    /// Smaller than the smallest tabulated level.
    Below(f64),
    /// Larger than the largest tabulated level.
    Above(f64),
}

impl PValue {
    /// Point estimate or the bound value.
    pub fn value(&self) -> f64 {
        match *self {
            PValue::Estimate(p) | PValue::Below(p) | PValue::Above(p) => p,
        }
    }

    pub fn is_bound(&self) -> bool {
        !matches!(self, PValue::Estimate(_))
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PValue::Estimate(p) => write!(f, "{:.4}", round_to(p, 4)),
            PValue::Below(p) => write!(f, "<{p}"),
            PValue::Above(p) => write!(f, ">{p}"),
        }
    }
}

impl Serialize for PValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PValue::Estimate(p) => s.serialize_f64(*p),
            bound => s.serialize_str(&bound.to_string()),
        }
    }
}

/// Rounds half away from zero at `places` decimals. Values within a few ulps
/// of a tie count as the tie, so an interpolated 0.44374999... reports as
/// 0.4438.
pub fn round_to(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    let y = x * scale;
    let (whole, frac) = (y.abs().trunc(), y.abs().fract());
    let y = if (frac - 0.5).abs() <= 1e-9 * y.abs().max(1.0) {
        y.signum() * (whole + 0.5)
    } else {
        y
    };
    y.round() / scale
}

/// Interpolates γ linearly in r between adjacent `(r_γ, γ)` knots.
///
/// With `j` the last level whose `r_γj <= r`, the estimate lies in
/// `[γj, γj+1)`, so `p < γ` exactly when `r < r_γ`.
pub fn p_value_from_row(levels: &[f64], row: &[f64], r: f64) -> Result<PValue> {
    if levels.is_empty() || levels.len() != row.len() {
        return Err(Error::Argument(
            "levels and critical values differ in length".into(),
        ));
    }
    if !r.is_finite() {
        return Err(Error::Domain {
            what: "statistic",
            value: r,
        });
    }
    let last = levels.len() - 1;
    let Some(j) = row.iter().rposition(|&c| c <= r) else {
        return Ok(PValue::Below(levels[0]));
    };
    if j == last {
        return Ok(if r == row[last] {
            PValue::Estimate(levels[last])
        } else {
            PValue::Above(levels[last])
        });
    }
    let (r0, r1) = (row[j], row[j + 1]);
    let (g0, g1) = (levels[j], levels[j + 1]);
    Ok(PValue::Estimate(g0 + (g1 - g0) * (r - r0) / (r1 - r0)))
}

pub fn p_value(table: &CriticalValueTable, n: usize, r: f64) -> Result<PValue> {
    p_value_from_row(table.levels(), &critical_row(table, n)?, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decision {
    pub level: f64,
    pub critical_value: f64,
    pub reject: bool,
}

/// Outcome of one goodness-of-fit test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofReport {
    pub r: f64,
    pub n: usize,
    pub p_value: PValue,
    pub decisions: Vec<Decision>,
    pub table_meta: TableMeta,
}

/// Tests H0: the sample is Birnbaum-Saunders distributed.
///
/// Rejects at level γ exactly when `r < r_γ`.
pub fn run_test<T: Real>(
    sample: &Sample<T>,
    levels: &[f64],
    table: &CriticalValueTable,
) -> Result<GofReport> {
    let n = sample.len();
    // Range problems surface before the statistic is computed.
    let row = critical_row(table, n)?;
    let r = bs_plot_statistic(sample)?.r.as_f64();
    let decisions = levels
        .iter()
        .map(|&level| {
            let idx = table.level_index(level).ok_or(Error::Level(level))?;
            let critical_value = row[idx];
            Ok(Decision {
                level,
                critical_value,
                reject: r < critical_value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GofReport {
        r,
        n,
        p_value: p_value_from_row(table.levels(), &row, r)?,
        decisions,
        table_meta: table.meta().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::paper_table;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rounding_treats_near_ties_as_ties() {
        let p = 0.25 + 0.25 * (0.9911 - 0.9880) / (0.9920 - 0.9880);
        assert_eq!(round_to(p, 4), 0.4438);
        assert_eq!(round_to(-0.00125, 4), -0.0013);
        assert_eq!(round_to(0.12344, 4), 0.1234);
        assert_eq!(round_to(0.991069, 6), 0.991069);
        assert_eq!(PValue::Estimate(p).to_string(), "0.4438");
    }

    #[test]
    fn lookup_tabulated_and_interpolated() {
        let t = paper_table().unwrap();
        assert_eq!(lookup_critical(&t, 46, 0.25).unwrap(), 0.9880);
        assert_eq!(lookup_critical(&t, 3, 0.005).unwrap(), 0.7208);
        assert_abs_diff_eq!(
            lookup_critical(&t, 105, 0.05).unwrap(),
            0.9875,
            epsilon = 1e-12
        );
        // 52 lies 2/5 of the way from 50 to 55.
        assert_abs_diff_eq!(
            lookup_critical(&t, 52, 0.5).unwrap(),
            0.9924 + 0.4 * (0.9929 - 0.9924),
            epsilon = 1e-12
        );
    }

    #[test]
    fn lookup_errors() {
        let t = paper_table().unwrap();
        assert!(matches!(
            lookup_critical(&t, 2, 0.05),
            Err(Error::TooSmall { .. })
        ));
        assert!(matches!(
            lookup_critical(&t, 1001, 0.05),
            Err(Error::OutOfRange { max: 1000, .. })
        ));
        assert!(matches!(lookup_critical(&t, 46, 0.3), Err(Error::Level(_))));
    }

    #[test]
    fn p_value_cases() {
        let t = paper_table().unwrap();
        assert_abs_diff_eq!(
            p_value(&t, 46, 0.9911).unwrap().value(),
            0.44375,
            epsilon = 1e-9
        );
        assert_eq!(p_value(&t, 46, 0.9215).unwrap(), PValue::Below(0.005));
        assert_eq!(p_value(&t, 46, 0.9880).unwrap(), PValue::Estimate(0.25));
        assert_eq!(p_value(&t, 46, 0.9990).unwrap(), PValue::Above(0.5));
        assert_eq!(p_value(&t, 46, 0.9920).unwrap(), PValue::Estimate(0.5));
        assert_eq!(p_value(&t, 46, 0.9639).unwrap(), PValue::Estimate(0.005));
    }

    #[test]
    fn flat_segments_stay_consistent() {
        let levels = [0.1, 0.2, 0.3];
        let row = [0.9, 0.95, 0.95];
        // Equal to a repeated critical value: not rejected at either level.
        assert_eq!(
            p_value_from_row(&levels, &row, 0.95).unwrap(),
            PValue::Estimate(0.3)
        );
        let mid = p_value_from_row(&levels, &row, 0.925).unwrap().value();
        assert_abs_diff_eq!(mid, 0.15, epsilon = 1e-12);
    }

    #[test]
    fn p_value_display() {
        assert_eq!(PValue::Below(0.005).to_string(), "<0.005");
        assert_eq!(PValue::Above(0.5).to_string(), ">0.5");
        assert_eq!(PValue::Estimate(0.44375).to_string(), "0.4438");
    }
}
