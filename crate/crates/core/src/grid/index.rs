//! Multi-index sets and Smolyak combination coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Per-dimension 1D levels `(i_1, ..., i_d)`, each at least 1.
///
/// Ordering is lexicographic, which fixes the summation order of the
/// combination technique.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("multi-index must have at least one entry"));
        }
        if let Some(pos) = entries.iter().position(|&i| i == 0) {
            return Err(Error::invalid(format!(
                "multi-index entries must be >= 1 (entry {pos} is 0)"
            )));
        }
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    /// `Σ (i_k - 1)`, the total-degree level of this index.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|i| i - 1).sum()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All `i ∈ ℤ_{≥1}^d` with `Σ (i_k - 1) ≤ w`.
pub fn total_degree_index_set(dimension: usize, level: usize) -> Result<BTreeSet<MultiIndex>> {
    if dimension == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let mut out = BTreeSet::new();
    let mut current = vec![1usize; dimension];
    fill_total_degree(0, level, &mut current, &mut out);
    Ok(out)
}

fn fill_total_degree(
    dim: usize,
    remaining: usize,
    current: &mut Vec<usize>,
    out: &mut BTreeSet<MultiIndex>,
) {
    if dim == current.len() {
        out.insert(MultiIndex(current.clone()));
        return;
    }
    for extra in 0..=remaining {
        current[dim] = 1 + extra;
        fill_total_degree(dim + 1, remaining - extra, current, out);
    }
    current[dim] = 1;
}

/// Combination coefficients `c_i = Σ_{z ∈ {0,1}^d, i+z ∈ I} (-1)^{|z|}` over a
/// downward-closed index set `I`. Zero coefficients are dropped.
pub fn combination_coefficients(index_set: &BTreeSet<MultiIndex>) -> Result<BTreeMap<MultiIndex, i64>> {
    let first = index_set
        .iter()
        .next()
        .ok_or_else(|| Error::invalid("index set is empty"))?;
    let d = first.dimension();
    if d >= 32 {
        return Err(Error::invalid(format!("dimension {d} too large for combination coefficients")));
    }
    for idx in index_set {
        if idx.dimension() != d {
            return Err(Error::invalid("index set mixes dimensions"));
        }
        for k in 0..d {
            if idx.0[k] > 1 {
                let mut lower = idx.0.clone();
                lower[k] -= 1;
                if !index_set.contains(&MultiIndex(lower.clone())) {
                    return Err(Error::invalid(format!(
                        "index set is not downward closed: {idx:?} present but {lower:?} missing"
                    )));
                }
            }
        }
    }

    let mut coefficients = BTreeMap::new();
    for idx in index_set {
        let mut c = 0i64;
        for mask in 0u32..(1u32 << d) {
            let shifted = idx.0.iter().enumerate().map(|(k, &i)| i + ((mask >> k) & 1) as usize).collect();
            if index_set.contains(&MultiIndex(shifted)) {
                c += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            }
        }
        if c != 0 {
            coefficients.insert(idx.clone(), c);
        }
    }
    Ok(coefficients)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    fn binomial(n: usize, k: usize) -> i64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
    }

    #[test]
    fn small_index_sets() {
        let s = total_degree_index_set(2, 0).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![mi(&[1, 1])]);

        let s = total_degree_index_set(2, 1).unwrap();
        let expected: BTreeSet<_> = [mi(&[1, 1]), mi(&[2, 1]), mi(&[1, 2])].into_iter().collect();
        assert_eq!(s, expected);

        assert_eq!(total_degree_index_set(3, 2).unwrap().len(), 10);
    }

    #[test]
    fn cardinality_is_binomial() {
        for d in 1..=6 {
            for w in 0..=6 {
                let s = total_degree_index_set(d, w).unwrap();
                assert_eq!(s.len() as i64, binomial(w + d, d), "d={d} w={w}");
                assert!(s.iter().all(|i| i.degree() <= w && i.dimension() == d));
            }
        }
    }

    #[test]
    fn coefficients_d2_w1() {
        let c = combination_coefficients(&total_degree_index_set(2, 1).unwrap()).unwrap();
        let expected: BTreeMap<_, _> =
            [(mi(&[1, 1]), -1), (mi(&[2, 1]), 1), (mi(&[1, 2]), 1)].into_iter().collect();
        assert_eq!(c, expected);

        let c = combination_coefficients(&total_degree_index_set(2, 0).unwrap()).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![(mi(&[1, 1]), 1)]);
    }

    // Closed form for total-degree sets:
    // c_i = (-1)^(w-|i-1|) * C(d-1, w-|i-1|) when w-d+1 <= |i-1| <= w.
    #[test]
    fn coefficients_match_closed_form() {
        for d in 1..=6 {
            for w in 0..=5 {
                let set = total_degree_index_set(d, w).unwrap();
                let c = combination_coefficients(&set).unwrap();
                for idx in &set {
                    let gap = w - idx.degree();
                    let expected = if gap < d {
                        let sign = if gap % 2 == 0 { 1 } else { -1 };
                        sign * binomial(d - 1, gap)
                    } else {
                        0
                    };
                    assert_eq!(c.get(idx).copied().unwrap_or(0), expected, "d={d} w={w} {idx:?}");
                }
                assert_eq!(c.values().sum::<i64>(), 1, "d={d} w={w}");
            }
        }
    }

    #[test]
    fn rejects_non_downward_closed() {
        let set: BTreeSet<_> = [mi(&[1, 1]), mi(&[1, 3])].into_iter().collect();
        assert!(matches!(combination_coefficients(&set), Err(Error::InvalidArgument(_))));
        assert!(combination_coefficients(&BTreeSet::new()).is_err());
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(MultiIndex::new(vec![]).is_err());
        assert!(MultiIndex::new(vec![1, 0]).is_err());
        assert!(total_degree_index_set(0, 2).is_err());
    }
}
