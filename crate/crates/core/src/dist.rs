//! Birnbaum-Saunders fatigue-life distribution.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal::{cdf_unchecked, quantile_unchecked};
use crate::real::Real;
use crate::sample::Sample;

/// Shape `alpha` and scale `beta`, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsParams<T> {
    alpha: T,
    beta: T,
}

impl<T: Real> BsParams<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha.is_finite()) {
            return Err(Error::Domain {
                what: "shape alpha",
                value: alpha.as_f64(),
            });
        }
        if !(beta > T::zero() && beta.is_finite()) {
            return Err(Error::Domain {
                what: "scale beta",
                value: beta.as_f64(),
            });
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "time t",
            value: t.as_f64(),
        })
    }
}

/// Density
/// `f(t) = [√(β/t) + (β/t)^{3/2}] / (2αβ√(2π)) · exp(-(t/β - 2 + β/t) / (2α²))`.
pub fn bs_pdf<T: Real>(t: T, params: &BsParams<T>) -> Result<T> {
    check_time(t)?;
    let (a, b) = (params.alpha, params.beta);
    let ratio = b / t;
    let root = ratio.sqrt();
    let two = T::lit(2.0);
    let front = (root + ratio * root) / (two * a * b * T::lit(std::f64::consts::TAU).sqrt());
    let expo = -(t / b - two + ratio) / (two * a * a);
    Ok(front * expo.exp())
}

/// `Φ[(√(t/β) - √(β/t)) / α]`.
pub fn bs_cdf<T: Real>(t: T, params: &BsParams<T>) -> Result<T> {
    check_time(t)?;
    Ok(cdf_unchecked(standardize(t, params)))
}

#[inline]
fn standardize<T: Real>(t: T, params: &BsParams<T>) -> T {
    ((t / params.beta).sqrt() - (params.beta / t).sqrt()) / params.alpha
}

/// Closed-form inverse of [`bs_cdf`].
pub fn bs_quantile<T: Real>(p: T, params: &BsParams<T>) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::Domain {
            what: "probability",
            value: p.as_f64(),
        });
    }
    Ok(quantile_from_normal(quantile_unchecked(p), params))
}

/// Maps a standard normal deviate `z` to `β (w + √(w² + 1))²` with `w = αz/2`.
#[inline]
pub(crate) fn quantile_from_normal<T: Real>(z: T, params: &BsParams<T>) -> T {
    let w = params.alpha * z / T::lit(2.0);
    let h = (w * w + T::one()).sqrt();
    // w + h cancels for large negative w; use its reciprocal form there.
    let root = if w >= T::zero() {
        w + h
    } else {
        T::one() / (h - w)
    };
    params.beta * root * root
}

/// Fills `out` with independent draws by exact inversion of uniform deviates.
pub(crate) fn draw_into<T: Real, R: RngCore + ?Sized>(
    out: &mut [T],
    params: &BsParams<T>,
    rng: &mut R,
) {
    for slot in out.iter_mut() {
        let u = T::open_unit(rng.next_u64());
        *slot = quantile_from_normal(quantile_unchecked(u), params);
    }
}

/// Draws `n` observations. The stream is fully determined by the RNG state.
pub fn bs_sample<T: Real, R: RngCore + ?Sized>(
    n: usize,
    params: &BsParams<T>,
    rng: &mut R,
) -> Result<Sample<T>> {
    if n == 0 {
        return Err(Error::Argument("sample size must be at least 1".into()));
    }
    let mut values = vec![T::zero(); n];
    draw_into(&mut values, params, rng);
    Sample::new(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(a: f64, b: f64) -> BsParams<f64> {
        BsParams::new(a, b).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(BsParams::new(0.0, 1.0).is_err());
        assert!(BsParams::new(1.0, -2.0).is_err());
        assert!(BsParams::new(f64::NAN, 1.0).is_err());
        assert!(BsParams::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn pdf_at_scale() {
        for a in [0.1, 0.5, 1.0, 3.0] {
            let p = params(a, 2.5);
            let expected = 1.0 / (a * 2.5 * (2.0 * std::f64::consts::PI).sqrt());
            assert_abs_diff_eq!(bs_pdf(2.5, &p).unwrap(), expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn non_positive_time_is_domain_error() {
        let p = params(1.0, 1.0);
        assert!(bs_pdf(0.0, &p).is_err());
        assert!(bs_cdf(-1.0, &p).is_err());
        assert!(bs_cdf(f64::NAN, &p).is_err());
    }

    #[test]
    fn cdf_at_scale_is_half() {
        assert_eq!(bs_cdf(3.0, &params(0.7, 3.0)).unwrap(), 0.5);
    }

    #[test]
    fn cdf_reference_point() {
        // Φ(√2 - 1/√2) from an independent normal CDF.
        assert_abs_diff_eq!(
            bs_cdf(2.0, &params(1.0, 1.0)).unwrap(),
            0.760_249_938_906_523_4,
            epsilon = 1e-12
        );
    }

    #[test]
    fn cdf_limits_are_monotone() {
        let p = params(1.5, 1.0);
        let grid: Vec<f64> = (-40..=40).map(|k| 10f64.powf(k as f64 / 4.0)).collect();
        let vals: Vec<f64> = grid.iter().map(|&t| bs_cdf(t, &p).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        assert!(vals[0] < 1e-12);
        assert!(vals[vals.len() - 1] > 1.0 - 1e-12);
    }

    #[test]
    fn quantile_median_is_scale() {
        assert_eq!(bs_quantile(0.5, &params(2.0, 3.0)).unwrap(), 3.0);
    }

    #[test]
    fn quantile_reference_point() {
        assert_abs_diff_eq!(
            bs_quantile(0.7602499, &params(1.0, 1.0)).unwrap(),
            2.0,
            epsilon = 1e-5
        );
    }

    #[test]
    fn quantile_rejects_bad_probability() {
        assert!(bs_quantile(0.0, &params(1.0, 1.0)).is_err());
        assert!(bs_quantile(1.0, &params(1.0, 1.0)).is_err());
    }

    #[test]
    fn quantile_tail_has_no_cancellation() {
        // Large alpha, deep lower tail: the naive w + sqrt(w^2+1) form underflows to 0.
        let p = params(50.0, 1.0);
        let t = bs_quantile(1e-12, &p).unwrap();
        assert!(t > 0.0);
        assert!((bs_cdf(t, &p).unwrap() / 1e-12 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn sample_is_deterministic_and_positive() {
        let p = params(1.0, 1.0);
        let a = bs_sample(5, &p, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = bs_sample(5, &p, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a.values(), b.values());
        assert!(a.values().iter().all(|&t| t > 0.0));
    }

    #[test]
    fn sample_rejects_zero_size() {
        assert!(bs_sample(0, &params(1.0, 1.0), &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn sample_median_tracks_scale() {
        let p = params(0.5, 2.0);
        let s = bs_sample(100_000, &p, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let sorted = s.sorted();
        let median = 0.5 * (sorted[49_999] + sorted[50_000]);
        assert_abs_diff_eq!(median, 2.0, epsilon = 0.02);
    }

    #[test]
    fn single_precision_sampler() {
        let p = BsParams::new(1.0f32, 1.0).unwrap();
        let s = bs_sample(1000, &p, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(s.values().iter().all(|&t| t > 0.0 && t.is_finite()));
    }
}
