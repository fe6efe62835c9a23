//! Goodness-of-fit testing for the Birnbaum-Saunders fatigue-life
//! distribution using the correlation coefficient of its linearized
//! probability plot.
//!
//! ```
//! use bsppcc::{datasets, paper_table, run_test, Sample64, PAPER_LEVELS};
//!
//! let sample = Sample64::new(datasets::REPAIR_TIMES.to_vec()).unwrap();
//! let table = paper_table().unwrap();
//! let report = run_test(&sample, &PAPER_LEVELS, &table).unwrap();
//! assert!((report.r - 0.9911).abs() < 1e-4);
//! ```
//!
//! Distribution and statistic code is generic over [`Real`] (`f32`, `f64`);
//! tables and the Monte Carlo machinery work in `f64`.

pub mod datasets;
pub mod dist;
pub mod error;
pub mod gof;
pub mod mc;
pub mod normal;
pub mod plot;
pub mod real;
pub mod sample;
pub mod table;

pub use dist::{bs_cdf, bs_pdf, bs_quantile, bs_sample, BsParams};
pub use error::{Error, Result};
pub use gof::{lookup_critical, p_value, run_test, Decision, GofReport, PValue};
pub use mc::{
    accuracy_bound, alpha_sensitivity, build_table, empirical_quantile, simulate_null_r,
    AlphaSensitivity, SimConfig,
};
pub use normal::{std_normal_cdf, std_normal_pdf, std_normal_quantile};
pub use plot::{
    bs_plot_statistic, correlation, linearize, plotting_positions, CorrelationStat, PlotPoint,
    PlotPoints,
};
pub use real::Real;
pub use sample::Sample;
pub use table::{paper_table, CriticalValueTable, TableMeta, TableSource, PAPER_LEVELS};

pub type BsParams64 = BsParams<f64>;
pub type BsParams32 = BsParams<f32>;
pub type Sample64 = Sample<f64>;
pub type Sample32 = Sample<f32>;
pub type PlotPoints64 = PlotPoints<f64>;
pub type PlotPoints32 = PlotPoints<f32>;
pub type CorrelationStat64 = CorrelationStat<f64>;
pub type CorrelationStat32 = CorrelationStat<f32>;
