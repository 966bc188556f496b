use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Axis-aligned box `[a_1, b_1] × ... × [a_d, b_d]` with `a_k < b_k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Domain<S> {
    intervals: Vec<(S, S)>,
}

impl<S: Scalar> Domain<S> {
    pub fn new(intervals: Vec<(S, S)>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::invalid("domain must have at least one interval"));
        }
        for (k, &(lo, hi)) in intervals.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::invalid(format!(
                    "domain interval {k} must satisfy finite lower < upper, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { intervals })
    }

    /// The same interval repeated `dimension` times.
    pub fn cube(lower: S, upper: S, dimension: usize) -> Result<Self> {
        Self::new(vec![(lower, upper); dimension])
    }

    /// Parses the flat form `a1, b1, a2, b2, ...`.
    pub fn from_flat(bounds: &[S]) -> Result<Self> {
        if !bounds.len().is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "domain needs an even number of bounds, got {}",
                bounds.len()
            )));
        }
        Self::new(bounds.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    pub fn dimension(&self) -> usize {
        self.intervals.len()
    }

    pub fn intervals(&self) -> &[(S, S)] {
        &self.intervals
    }

    /// Affine image of a reference coordinate `v ∈ [-1, 1]` in dimension `k`.
    /// The endpoints map exactly onto the interval bounds.
    pub fn to_physical(&self, k: usize, v: S) -> S {
        let (lo, hi) = self.intervals[k];
        if v <= -S::one() {
            return lo;
        }
        if v >= S::one() {
            return hi;
        }
        let x = lo + (hi - lo) * (v + S::one()) / S::lit(2.0);
        x.max(lo).min(hi)
    }

    /// Inverse of [`Domain::to_physical`], clamped to `[-1, 1]`.
    pub fn to_reference(&self, k: usize, x: S) -> S {
        let (lo, hi) = self.intervals[k];
        let v = S::lit(2.0) * (x - lo) / (hi - lo) - S::one();
        v.max(-S::one()).min(S::one())
    }

    pub fn contains(&self, x: &[S]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(&self.intervals)
                .all(|(&v, &(lo, hi))| v >= lo && v <= hi)
    }

    /// Errors with [`Error::OutOfDomain`] unless `x` lies in the closed box.
    pub fn check(&self, x: &[S]) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::invalid(format!(
                "point has {} coordinates, domain has dimension {}",
                x.len(),
                self.dimension()
            )));
        }
        for (k, (&v, &(lo, hi))) in x.iter().zip(&self.intervals).enumerate() {
            if !(v >= lo && v <= hi) {
                return Err(Error::OutOfDomain {
                    point: x.iter().map(|c| c.as_f64()).collect(),
                    dimension: k,
                    value: v.as_f64(),
                    lower: lo.as_f64(),
                    upper: hi.as_f64(),
                });
            }
        }
        Ok(())
    }
}
