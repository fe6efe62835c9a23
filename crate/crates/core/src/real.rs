//! Scalar abstraction shared by the distribution and statistic code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the distribution and plot code is generic over.
///
/// Implemented for `f32` and `f64`. Only `f64` meets the documented
/// accuracy targets; `f32` is supported for memory-bound callers.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Complementary error function.
    fn erfc(self) -> Self;

    /// Maps 64 random bits onto the open interval (0, 1) at this type's precision.
    fn open_unit(bits: u64) -> Self;

    /// Converts an `f64` literal. Panics only if the literal is not representable at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }

    #[inline]
    fn open_unit(bits: u64) -> Self {
        // 52 high bits, centred in their cell: never 0, never 1.
        ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }
}

impl Real for f32 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }

    #[inline]
    fn open_unit(bits: u64) -> Self {
        // 23 bits so that the half-cell offset stays exactly representable.
        ((bits >> 41) as f32 + 0.5) * (1.0 / (1u32 << 23) as f32)
    }
}
