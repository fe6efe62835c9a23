use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::Real;

/// Validated positive observations, kept in input order with a sorted copy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample<T> {
    values: Vec<T>,
    #[serde(skip)]
    sorted: Vec<T>,
}

impl<T: Real> Sample<T> {
    /// Rejects empty input and any value that is not strictly positive and finite.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooSmall { n: 0, min: 1 });
        }
        if let Some((index, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > T::zero() && v.is_finite()))
        {
            return Err(Error::Data {
                index,
                value: v.as_f64(),
            });
        }
        let mut sorted = values.clone();
        // All values are finite, so partial_cmp never fails.
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { values, sorted })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Observations in the order they were supplied.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Order statistics t(1) <= ... <= t(n).
    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// Every observation multiplied by `c > 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        if !(c > T::zero() && c.is_finite()) {
            return Err(Error::Domain {
                what: "scale factor",
                value: c.as_f64(),
            });
        }
        Self::new(self.values.iter().map(|&v| v * c).collect())
    }
}

impl<T: Real> TryFrom<Vec<T>> for Sample<T> {
    type Error = Error;

    fn try_from(values: Vec<T>) -> Result<Self> {
        Self::new(values)
    }
}

impl<T: Real> TryFrom<&[T]> for Sample<T> {
    type Error = Error;

    fn try_from(values: &[T]) -> Result<Self> {
        Self::new(values.to_vec())
    }
}
