//! Linearized Birnbaum-Saunders probability plot and its correlation statistic.
//!
//! Under the model, `v = √t · Φ⁻¹(F(t))` is an affine function of `u = t`, so
//! the Pearson correlation of `(t(i), √t(i) · Φ⁻¹(p_i))` measures fit.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::normal::quantile_unchecked;
use crate::real::Real;
use crate::sample::Sample;

/// Smallest sample the statistic is defined for.
pub const MIN_SAMPLE_SIZE: usize = 3;

/// Largest n that still uses the Blom positions `(i - 3/8) / (n + 1/4)`.
const BLOM_MAX_N: usize = 10;

/// Plotting positions: Blom's rule for n <= 10, `(i - 1/2) / n` above.
pub fn plotting_positions<T: Real>(n: usize) -> Result<Vec<T>> {
    if n == 0 {
        return Err(Error::Argument("plotting positions need n >= 1".into()));
    }
    let nf = T::from_usize(n).expect("n representable");
    let half = T::lit(0.5);
    Ok((1..=n)
        .map(|i| {
            let i = T::from_usize(i).expect("i representable");
            if n <= BLOM_MAX_N {
                (i - T::lit(0.375)) / (nf + T::lit(0.25))
            } else {
                (i - half) / nf
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlotPoint<T> {
    pub p: T,
    pub u: T,
    pub v: T,
}

/// Points of the linearized plot, ordered by rank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlotPoints<T> {
    entries: Vec<PlotPoint<T>>,
}

impl<T: Real> PlotPoints<T> {
    /// Checks `0 < p < 1` strictly increasing and `u` non-decreasing.
    pub fn new(entries: Vec<PlotPoint<T>>) -> Result<Self> {
        if entries.len() < MIN_SAMPLE_SIZE {
            return Err(Error::TooSmall {
                n: entries.len(),
                min: MIN_SAMPLE_SIZE,
            });
        }
        for (i, e) in entries.iter().enumerate() {
            if !(e.p > T::zero() && e.p < T::one()) || !e.u.is_finite() || !e.v.is_finite() {
                return Err(Error::Argument(format!(
                    "invalid plot point at rank {}",
                    i + 1
                )));
            }
        }
        if entries.windows(2).any(|w| {
            w[0].p.partial_cmp(&w[1].p) != Some(std::cmp::Ordering::Less) || w[0].u > w[1].u
        }) {
            return Err(Error::Argument(
                "plot points must have increasing p and non-decreasing u".into(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[PlotPoint<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Least-squares line `v = intercept + slope · u`.
    pub fn fit_line(&self) -> Result<(T, T)> {
        let n = T::from_usize(self.len()).expect("n representable");
        let (su, sv) = self
            .entries
            .iter()
            .fold((T::zero(), T::zero()), |(a, b), e| (a + e.u, b + e.v));
        let (mu, mv) = (su / n, sv / n);
        let (mut suu, mut suv) = (T::zero(), T::zero());
        for e in &self.entries {
            let du = e.u - mu;
            suu = suu + du * du;
            suv = suv + du * (e.v - mv);
        }
        if suu == T::zero() {
            return Err(Error::Degenerate("u has zero variance"));
        }
        let slope = suv / suu;
        Ok((mv - slope * mu, slope))
    }
}

/// Sample correlation coefficient of the plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationStat<T> {
    pub r: T,
    pub n: usize,
}

/// Builds `(p_i, t(i), √t(i) · Φ⁻¹(p_i))`. Tied observations keep distinct ranks.
pub fn linearize<T: Real>(sample: &Sample<T>) -> Result<PlotPoints<T>> {
    let n = sample.len();
    if n < MIN_SAMPLE_SIZE {
        return Err(Error::TooSmall {
            n,
            min: MIN_SAMPLE_SIZE,
        });
    }
    let positions = plotting_positions::<T>(n)?;
    let entries = sample
        .sorted()
        .iter()
        .zip(positions)
        .map(|(&t, p)| PlotPoint {
            p,
            u: t,
            v: t.sqrt() * quantile_unchecked(p),
        })
        .collect();
    Ok(PlotPoints { entries })
}

/// Pearson correlation of the plot's `(u, v)` coordinates.
pub fn correlation<T: Real>(points: &PlotPoints<T>) -> Result<CorrelationStat<T>> {
    let r = centered_pearson(|| points.entries.iter().map(|e| (e.u, e.v)))?;
    Ok(CorrelationStat { r, n: points.len() })
}

/// Pearson correlation of two equal-length slices, two-pass centred form.
pub fn pearson<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::Argument(
            "correlation inputs differ in length".into(),
        ));
    }
    if x.len() < 2 {
        return Err(Error::TooSmall { n: x.len(), min: 2 });
    }
    centered_pearson(|| x.iter().copied().zip(y.iter().copied()))
}

/// Shared arithmetic for every correlation path, so that the fast simulation
/// kernel and the public functions agree bit for bit.
#[inline]
fn centered_pearson<T, I, F>(pairs: F) -> Result<T>
where
    T: Real,
    I: Iterator<Item = (T, T)>,
    F: Fn() -> I,
{
    let mut count = 0usize;
    let (mut sx, mut sy) = (T::zero(), T::zero());
    for (x, y) in pairs() {
        sx = sx + x;
        sy = sy + y;
        count += 1;
    }
    let nf = T::from_usize(count).expect("n representable");
    let (mx, my) = (sx / nf, sy / nf);
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for (x, y) in pairs() {
        let (dx, dy) = (x - mx, y - my);
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
        sxy = sxy + dx * dy;
    }
    if sxx == T::zero() {
        return Err(Error::Degenerate("u has zero variance"));
    }
    if syy == T::zero() {
        return Err(Error::Degenerate("v has zero variance"));
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.max(-T::one()).min(T::one()))
}

/// The test statistic: `correlation(linearize(sample))`.
pub fn bs_plot_statistic<T: Real>(sample: &Sample<T>) -> Result<CorrelationStat<T>> {
    let n = sample.len();
    if n < MIN_SAMPLE_SIZE {
        return Err(Error::TooSmall {
            n,
            min: MIN_SAMPLE_SIZE,
        });
    }
    PlotKernel::new(n)?.statistic_sorted(sample.sorted())
}

/// Precomputed normal scores `Φ⁻¹(p_i)` for a fixed n.
///
/// Evaluates the statistic on already-sorted data without rebuilding the
/// plot, which is what the Monte Carlo loop needs.
#[derive(Debug, Clone)]
pub struct PlotKernel<T> {
    scores: Vec<T>,
}

impl<T: Real> PlotKernel<T> {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_SAMPLE_SIZE {
            return Err(Error::TooSmall {
                n,
                min: MIN_SAMPLE_SIZE,
            });
        }
        let scores = plotting_positions::<T>(n)?
            .into_iter()
            .map(quantile_unchecked)
            .collect();
        Ok(Self { scores })
    }

    pub fn n(&self) -> usize {
        self.scores.len()
    }

    /// `sorted` must be ascending, positive and of length `n`.
    pub fn statistic_sorted(&self, sorted: &[T]) -> Result<CorrelationStat<T>> {
        if sorted.len() != self.scores.len() {
            return Err(Error::Argument(format!(
                "kernel built for n={} got {} values",
                self.scores.len(),
                sorted.len()
            )));
        }
        if sorted[0] == sorted[sorted.len() - 1] {
            return Err(Error::Degenerate("all observations are identical"));
        }
        let r = centered_pearson(|| {
            sorted
                .iter()
                .zip(&self.scores)
                .map(|(&t, &z)| (t, t.sqrt() * z))
        })?;
        Ok(CorrelationStat { r, n: sorted.len() })
    }
}
