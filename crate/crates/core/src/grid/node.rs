//! Nested Clenshaw–Curtis nodes with exact dyadic identity.
//!
//! A node of level `k` on the reference interval `[-1, 1]` is `cos(π t)` with
//! `t = j / 2^(k-1)`. Storing the reduced fraction `t` rather than the cosine
//! makes node equality exact, so nestedness across levels never depends on a
//! floating-point comparison.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest supported 1D level; `2^(k-1)` must fit the `u64` denominator.
pub const MAX_LEVEL_1D: usize = 63;

/// Exact identity of a nested Clenshaw–Curtis node, `t = numerator / denominator`
/// with `t ∈ [0, 1]` reduced and the denominator a power of two.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalNode1D {
    numerator: u64,
    denominator: u64,
}

impl CanonicalNode1D {
    /// Builds the reduced fraction `numerator / denominator`.
    pub fn new(numerator: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 || !denominator.is_power_of_two() {
            return Err(Error::invalid(format!(
                "node denominator must be a power of two, got {denominator}"
            )));
        }
        if numerator > denominator {
            return Err(Error::invalid(format!(
                "node fraction {numerator}/{denominator} exceeds 1"
            )));
        }
        if numerator == 0 {
            return Ok(Self { numerator: 0, denominator: 1 });
        }
        let shift = numerator.trailing_zeros().min(denominator.trailing_zeros());
        Ok(Self {
            numerator: numerator >> shift,
            denominator: denominator >> shift,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// The fraction `t` as a float.
    pub fn fraction<S: Scalar>(&self) -> S {
        S::lit(self.numerator as f64) / S::lit(self.denominator as f64)
    }

    /// Coarsest 1D level at which this node first appears.
    pub fn level(&self) -> usize {
        match self.denominator {
            2 if self.numerator == 1 => 1,
            1 => 2,
            den => den.trailing_zeros() as usize + 1,
        }
    }

    /// Node position `cos(π t)` on the reference interval `[-1, 1]`.
    ///
    /// Computed so that `t = 1/2` gives exactly `0`, the endpoints give exactly
    /// `±1`, and mirrored nodes are exact negatives of one another.
    pub fn reference_value<S: Scalar>(&self) -> S {
        let (n, d) = (self.numerator, self.denominator);
        if n == 0 {
            return S::one();
        }
        if n == d {
            return -S::one();
        }
        if 2 * n == d {
            return S::zero();
        }
        if 2 * n > d {
            let mirrored = CanonicalNode1D {
                numerator: d - n,
                denominator: d,
            };
            return -mirrored.reference_value::<S>();
        }
        let t = self.fraction::<S>();
        if 4 * n <= d {
            (S::PI() * t).cos()
        } else {
            (S::PI() * (S::lit(0.5) - t)).sin()
        }
    }
}

impl Ord for CanonicalNode1D {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numerator as u128 * other.denominator as u128;
        let rhs = other.numerator as u128 * self.denominator as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for CanonicalNode1D {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CanonicalNode1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

impl fmt::Debug for CanonicalNode1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CanonicalNode1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (num, den) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::parse("node id", format!("expected num/den, got {s:?}")))?;
        let num: u64 = num
            .parse()
            .map_err(|e| Error::parse("node id", format!("{s:?}: {e}")))?;
        let den: u64 = den
            .parse()
            .map_err(|e| Error::parse("node id", format!("{s:?}: {e}")))?;
        let node = CanonicalNode1D::new(num, den)
            .map_err(|e| Error::parse("node id", format!("{s:?}: {e}")))?;
        // Reject non-reduced spellings so that ids have a single textual form.
        if node.numerator != num || node.denominator != den {
            return Err(Error::parse(
                "node id",
                format!("{s:?} is not in reduced form (expected {node})"),
            ));
        }
        Ok(node)
    }
}

/// Number of nodes at 1D level `level`: `m(1) = 1`, `m(k) = 2^(k-1) + 1`.
pub fn node_count(level: usize) -> Result<usize> {
    check_level(level)?;
    Ok(if level == 1 { 1 } else { (1usize << (level - 1)) + 1 })
}

/// Nodes of 1D level `level`, sorted by ascending reference value
/// (descending `t`).
pub fn nodes_1d(level: usize) -> Result<Vec<CanonicalNode1D>> {
    check_level(level)?;
    if level == 1 {
        return Ok(vec![CanonicalNode1D {
            numerator: 1,
            denominator: 2,
        }]);
    }
    let den = 1u64 << (level - 1);
    (0..=den)
        .rev()
        .map(|j| CanonicalNode1D::new(j, den))
        .collect()
}

fn check_level(level: usize) -> Result<()> {
    if level == 0 {
        return Err(Error::invalid("1D level must be at least 1"));
    }
    if level > MAX_LEVEL_1D {
        return Err(Error::invalid(format!(
            "1D level {level} exceeds the supported maximum {MAX_LEVEL_1D}"
        )));
    }
    Ok(())
}
