//! Monte Carlo null distribution of the plot correlation and critical-value
//! table generation.
//!
//! Replicates are generated in fixed-size chunks. Chunk `c` for sample size
//! `n` draws from the ChaCha8 stream `(n << 32) | c` of the master seed, so
//! the output depends only on `(seed, n, I, alpha_gen)` and never on the
//! number of worker threads.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{draw_into, BsParams};
use crate::error::{Error, Result};
use crate::plot::{PlotKernel, MIN_SAMPLE_SIZE};
use crate::table::{validate_levels, CriticalValueTable, TableMeta, TableSource, PAPER_LEVELS};

/// Replicates per chunk. Part of the reproducibility contract: changing it
/// changes every generated table.
pub const CHUNK_SIZE: u64 = 1 << 16;

/// Minimum replicate count accepted for table building.
pub const MIN_TABLE_ITERATIONS: u64 = 1000;

/// Above this many replicates tables are built by two-pass selection instead
/// of a full in-memory sort.
pub const DEFAULT_IN_MEMORY_LIMIT: u64 = 10_000_000;

/// Chunks simulated concurrently before their output is consumed.
const CHUNKS_PER_BATCH: u64 = 64;

const HISTOGRAM_BINS: usize = 1 << 20;

pub const GENERATOR_VERSION: &str = "chacha8-inversion-v1";

/// One simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub iterations: u64,
    pub seed: u64,
    /// Shape of the generating distribution; the scale is fixed at 1.
    pub alpha_gen: f64,
    pub levels: Vec<f64>,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub in_memory_limit: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n: 46,
            iterations: 1_000_000,
            seed: 0,
            alpha_gen: 1.0,
            levels: PAPER_LEVELS.to_vec(),
            workers: 0,
            in_memory_limit: DEFAULT_IN_MEMORY_LIMIT,
        }
    }
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if self.n < MIN_SAMPLE_SIZE {
            return Err(Error::TooSmall {
                n: self.n,
                min: MIN_SAMPLE_SIZE,
            });
        }
        if self.n as u64 >= 1 << 32 {
            return Err(Error::Argument(format!("sample size {} too large", self.n)));
        }
        if self.iterations == 0 {
            return Err(Error::Argument("iterations must be at least 1".into()));
        }
        if self.iterations.div_ceil(CHUNK_SIZE) >= 1 << 32 {
            return Err(Error::Argument("too many iterations".into()));
        }
        validate_levels(&self.levels)?;
        BsParams::new(self.alpha_gen, 1.0)?;
        Ok(())
    }

    fn validate_for_table(&self) -> Result<()> {
        self.validate()?;
        if self.iterations < MIN_TABLE_ITERATIONS {
            return Err(Error::Argument(format!(
                "table building needs at least {MIN_TABLE_ITERATIONS} iterations, got {}",
                self.iterations
            )));
        }
        Ok(())
    }

    fn meta(&self) -> TableMeta {
        TableMeta {
            iterations: self.iterations,
            seed: Some(self.seed),
            alpha_gen: Some(self.alpha_gen),
            source: TableSource::MonteCarlo,
            generator: GENERATOR_VERSION.into(),
        }
    }
}

/// RNG for one chunk of one sample size.
pub fn chunk_rng(seed: u64, n: usize, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | chunk);
    rng
}

fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Argument(format!("cannot start worker pool: {e}")))
}

fn simulate_chunk(
    kernel: &PlotKernel<f64>,
    params: &BsParams<f64>,
    config: &SimConfig,
    chunk: u64,
    cancel: Option<&AtomicBool>,
) -> Result<Vec<f64>> {
    if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
        return Err(Error::Interrupted);
    }
    let start = chunk * CHUNK_SIZE;
    let count = CHUNK_SIZE.min(config.iterations - start) as usize;
    let mut rng = chunk_rng(config.seed, config.n, chunk);
    let mut buf = vec![0.0f64; config.n];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        draw_into(&mut buf, params, &mut rng);
        buf.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        out.push(kernel.statistic_sorted(&buf)?.r);
    }
    Ok(out)
}

/// Runs every chunk, handing batches to `consume` in chunk order.
fn for_each_batch<F>(config: &SimConfig, cancel: Option<&AtomicBool>, mut consume: F) -> Result<()>
where
    F: FnMut(Vec<Vec<f64>>) -> Result<()>,
{
    config.validate()?;
    let kernel = PlotKernel::<f64>::new(config.n)?;
    let params = BsParams::new(config.alpha_gen, 1.0)?;
    let pool = thread_pool(config.workers)?;
    let chunks = config.iterations.div_ceil(CHUNK_SIZE);
    let mut first = 0;
    while first < chunks {
        let last = (first + CHUNKS_PER_BATCH).min(chunks);
        let batch = pool.install(|| {
            (first..last)
                .into_par_iter()
                .map(|c| simulate_chunk(&kernel, &params, config, c, cancel))
                .collect::<Result<Vec<_>>>()
        })?;
        consume(batch)?;
        first = last;
    }
    Ok(())
}

/// `I` simulated statistics under the null.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSample {
    values: Vec<f64>,
}

impl NullSample {
    /// Statistics in generation (chunk) order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_sorted(mut self) -> Vec<f64> {
        self.values.sort_unstable_by(f64::total_cmp);
        self.values
    }
}

/// Simulates `config.iterations` statistics from BS(`alpha_gen`, 1) samples of size `n`.
pub fn simulate_null_r(config: &SimConfig) -> Result<NullSample> {
    simulate_null_r_with(config, None)
}

pub fn simulate_null_r_with(config: &SimConfig, cancel: Option<&AtomicBool>) -> Result<NullSample> {
    config.validate()?;
    let mut values = Vec::new();
    let requested = config.iterations;
    values
        .try_reserve_exact(usize::try_from(requested).map_err(|_| Error::Capacity { requested })?)
        .map_err(|_| Error::Capacity { requested })?;
    for_each_batch(config, cancel, |batch| {
        batch.into_iter().for_each(|c| values.extend(c));
        Ok(())
    })?;
    Ok(NullSample { values })
}

/// 1-based rank `k = ⌈γ·I⌉`, clamped to `1..=I`.
///
/// Products within 1e-9 (relative) of an integer are treated as that integer,
/// so that e.g. `0.07 · 100` gives 7 rather than 8.
pub fn quantile_rank(gamma: f64, count: usize) -> usize {
    let x = gamma * count as f64;
    let r = x.round();
    let k = if (x - r).abs() <= 1e-9 * x.max(1.0) {
        r
    } else {
        x.ceil()
    };
    (k as usize).clamp(1, count)
}

/// Left-continuous inverse of the empirical CDF: the `⌈γ·I⌉`-th order statistic.
pub fn empirical_quantile(sorted: &[f64], gamma: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::Argument(
            "empirical quantile of an empty collection".into(),
        ));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain {
            what: "significance level",
            value: gamma,
        });
    }
    Ok(sorted[quantile_rank(gamma, sorted.len()) - 1])
}

/// Worst-case Monte Carlo quantile accuracy proxy `0.5 / √I`.
///
/// This is `√(p(1-p)/I)` at `p = 1/2`; it leaves out the `1/f(F⁻¹(p))`
/// density factor of the asymptotic quantile variance.
pub fn accuracy_bound(iterations: u64) -> Result<f64> {
    if iterations == 0 {
        return Err(Error::Argument("iterations must be at least 1".into()));
    }
    Ok(0.5 / (iterations as f64).sqrt())
}

fn histogram_bin(r: f64) -> usize {
    let x = (r + 1.0) * 0.5 * HISTOGRAM_BINS as f64;
    (x.max(0.0) as usize).min(HISTOGRAM_BINS - 1)
}

/// Order statistics at the given 1-based ranks without holding all `I` values.
///
/// Pass one histograms the statistics; pass two regenerates the identical
/// stream and keeps only values falling in bins that contain a target rank.
pub fn select_order_statistics(
    config: &SimConfig,
    ranks: &[usize],
    cancel: Option<&AtomicBool>,
) -> Result<Vec<f64>> {
    let total = config.iterations as usize;
    if ranks.iter().any(|&k| k == 0 || k > total) {
        return Err(Error::Argument("order statistic rank out of range".into()));
    }
    let mut hist = vec![0u64; HISTOGRAM_BINS];
    for_each_batch(config, cancel, |batch| {
        for r in batch.iter().flatten() {
            hist[histogram_bin(*r)] += 1;
        }
        Ok(())
    })?;

    // For each rank: its bin and the number of values in earlier bins.
    let mut targets = Vec::with_capacity(ranks.len());
    let mut bins: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for &k in ranks {
        let mut before = 0u64;
        let mut bin = 0;
        for (b, &c) in hist.iter().enumerate() {
            if before + c >= k as u64 {
                bin = b;
                break;
            }
            before += c;
        }
        targets.push((bin, (k as u64 - before) as usize));
        bins.entry(bin).or_default();
    }

    for_each_batch(config, cancel, |batch| {
        for &r in batch.iter().flatten() {
            if let Some(slot) = bins.get_mut(&histogram_bin(r)) {
                slot.push(r);
            }
        }
        Ok(())
    })?;
    for slot in bins.values_mut() {
        slot.sort_unstable_by(f64::total_cmp);
    }
    Ok(targets
        .into_iter()
        .map(|(bin, within)| bins[&bin][within - 1])
        .collect())
}

/// Critical values `r_γ` for every configured level of one sample size.
pub fn critical_values(config: &SimConfig, cancel: Option<&AtomicBool>) -> Result<Vec<f64>> {
    config.validate_for_table()?;
    if config.iterations <= config.in_memory_limit {
        let sorted = simulate_null_r_with(config, cancel)?.into_sorted();
        config
            .levels
            .iter()
            .map(|&g| empirical_quantile(&sorted, g))
            .collect()
    } else {
        let total = config.iterations as usize;
        let ranks: Vec<usize> = config
            .levels
            .iter()
            .map(|&g| quantile_rank(g, total))
            .collect();
        select_order_statistics(config, &ranks, cancel)
    }
}

/// Builds one row per n in `sizes` using `template` for everything but `n`.
pub fn build_table(sizes: &[usize], template: &SimConfig) -> Result<CriticalValueTable> {
    build_table_with(sizes, template, None, |_, _| Ok(()))
}

/// [`build_table`] with cancellation and a per-row callback (for streaming
/// rows to disk). Any failure returns [`Error::Aborted`] carrying the rows
/// completed so far.
pub fn build_table_with<F>(
    sizes: &[usize],
    template: &SimConfig,
    cancel: Option<&AtomicBool>,
    mut on_row: F,
) -> Result<CriticalValueTable>
where
    F: FnMut(usize, &[f64]) -> Result<()>,
{
    if sizes.is_empty() {
        return Err(Error::Argument("no sample sizes requested".into()));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n < MIN_SAMPLE_SIZE) {
        return Err(Error::TooSmall {
            n,
            min: MIN_SAMPLE_SIZE,
        });
    }
    template.validate_for_table()?;
    let mut table = CriticalValueTable::new(template.levels.clone(), template.meta())?;
    for &n in sizes {
        let config = SimConfig {
            n,
            ..template.clone()
        };
        let row = critical_values(&config, cancel)
            .and_then(|row| on_row(n, &row).map(|_| row))
            .and_then(|row| table.insert_row(n, row));
        if let Err(e) = row {
            return Err(Error::Aborted {
                n,
                reason: e.to_string(),
                partial: Box::new(table),
            });
        }
    }
    Ok(table)
}

/// Critical values per generator shape, for probing the shape dependence of
/// the null distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaSensitivity {
    pub n: usize,
    pub iterations: u64,
    pub levels: Vec<f64>,
    pub alphas: Vec<f64>,
    /// `critical[a][l]` is `r_γ` for `alphas[a]` at `levels[l]`.
    pub critical: Vec<Vec<f64>>,
    /// Largest pairwise difference across alphas, per level.
    pub max_deviation: Vec<f64>,
}

/// Runs the same seed under each generator shape (common random numbers).
pub fn alpha_sensitivity(
    n: usize,
    iterations: u64,
    alphas: &[f64],
    levels: &[f64],
    seed: u64,
    workers: usize,
) -> Result<AlphaSensitivity> {
    if alphas.is_empty() {
        return Err(Error::Argument("no generator shapes given".into()));
    }
    let critical = alphas
        .iter()
        .map(|&alpha_gen| {
            critical_values(
                &SimConfig {
                    n,
                    iterations,
                    seed,
                    alpha_gen,
                    levels: levels.to_vec(),
                    workers,
                    in_memory_limit: DEFAULT_IN_MEMORY_LIMIT,
                },
                None,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = (0..levels.len())
        .map(|l| {
            let col = critical.iter().map(|row| row[l]);
            let hi = col.clone().fold(f64::NEG_INFINITY, f64::max);
            let lo = col.fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .collect();
    Ok(AlphaSensitivity {
        n,
        iterations,
        levels: levels.to_vec(),
        alphas: alphas.to_vec(),
        critical,
        max_deviation,
    })
}
