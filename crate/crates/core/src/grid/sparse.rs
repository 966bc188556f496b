//! Total-degree Smolyak sparse grids on nested Clenshaw–Curtis nodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::domain::Domain;
use crate::grid::index::{combination_coefficients, total_degree_index_set, MultiIndex};
use crate::grid::node::{nodes_1d, CanonicalNode1D};
use crate::scalar::Scalar;

/// Exact identity of a sparse grid point: one canonical node per dimension.
///
/// Serialized as `num/den` fractions joined by `;`, e.g. `1/2;0/1;1/1`.
/// Ordering is lexicographic over the per-dimension fractions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(Vec<CanonicalNode1D>);

impl PointId {
    pub fn new(nodes: Vec<CanonicalNode1D>) -> Self {
        Self(nodes)
    }

    pub fn nodes(&self) -> &[CanonicalNode1D] {
        &self.0
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, node) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{node}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointId({self})")
    }
}

impl FromStr for PointId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse("point id", "empty id"));
        }
        s.split(';')
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(PointId)
            .map_err(|e| Error::parse("point id", format!("{s:?}: {e}")))
    }
}

/// A grid point: its exact identity plus its physical coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPoint<S> {
    pub id: PointId,
    pub coords: Vec<S>,
}

impl<S: Scalar> GridPoint<S> {
    pub fn from_id(id: PointId, domain: &Domain<S>) -> Self {
        let coords = id
            .nodes()
            .iter()
            .enumerate()
            .map(|(k, node)| domain.to_physical(k, node.reference_value()))
            .collect();
        Self { id, coords }
    }
}

/// A level-`w` sparse grid: combination terms plus the deduplicated point set.
#[derive(Clone, Debug)]
pub struct SparseGrid<S> {
    level: usize,
    domain: Domain<S>,
    terms: BTreeMap<MultiIndex, i64>,
    points: BTreeMap<PointId, GridPoint<S>>,
}

impl<S: Scalar> SparseGrid<S> {
    /// Builds the total-degree grid `Σ (i_k - 1) ≤ level` over `domain`.
    pub fn build(dimension: usize, level: usize, domain: Domain<S>) -> Result<Self> {
        if domain.dimension() != dimension {
            return Err(Error::invalid(format!(
                "domain has {} intervals but the grid dimension is {dimension}",
                domain.dimension()
            )));
        }
        let terms = combination_coefficients(&total_degree_index_set(dimension, level)?)?;
        let mut points = BTreeMap::new();
        for index in terms.keys() {
            for id in tensor_ids(index)? {
                points
                    .entry(id.clone())
                    .or_insert_with(|| GridPoint::from_id(id, &domain));
            }
        }
        Ok(Self {
            level,
            domain,
            terms,
            points,
        })
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn domain(&self) -> &Domain<S> {
        &self.domain
    }

    /// Nonzero combination coefficients, in lexicographic multi-index order.
    pub fn terms(&self) -> &BTreeMap<MultiIndex, i64> {
        &self.terms
    }

    /// Points in canonical-id order.
    pub fn points(&self) -> impl ExactSizeIterator<Item = &GridPoint<S>> + '_ {
        self.points.values()
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = &PointId> + '_ {
        self.points.keys()
    }

    pub fn point(&self, id: &PointId) -> Option<&GridPoint<S>> {
        self.points.get(id)
    }

    pub fn contains(&self, id: &PointId) -> bool {
        self.points.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when `other` has the same dimension and domain.
    pub fn compatible_with(&self, other: &SparseGrid<S>) -> bool {
        self.domain == other.domain
    }

    /// The grid one level coarser over the same domain, if any.
    pub fn coarser(&self) -> Result<Self> {
        if self.level == 0 {
            return Err(Error::invalid("level-0 grid has no coarser level"));
        }
        Self::build(self.dimension(), self.level - 1, self.domain.clone())
    }

    /// The grid one level finer over the same domain.
    pub fn finer(&self) -> Result<Self> {
        Self::build(self.dimension(), self.level + 1, self.domain.clone())
    }

    pub fn id_set(&self) -> BTreeSet<PointId> {
        self.points.keys().cloned().collect()
    }
}

/// Ids of the tensor grid `nodes_1d(i_1) × ... × nodes_1d(i_d)`, last
/// dimension varying fastest.
pub(crate) fn tensor_ids(index: &MultiIndex) -> Result<Vec<PointId>> {
    let per_dim = index
        .entries()
        .iter()
        .map(|&l| nodes_1d(l))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = per_dim.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut counter = vec![0usize; per_dim.len()];
    for _ in 0..total {
        out.push(PointId(
            counter.iter().zip(&per_dim).map(|(&j, nodes)| nodes[j]).collect(),
        ));
        for k in (0..counter.len()).rev() {
            counter[k] += 1;
            if counter[k] < per_dim[k].len() {
                break;
            }
            counter[k] = 0;
        }
    }
    Ok(out)
}

/// Function values keyed by canonical point id.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Dataset<S> {
    values: BTreeMap<PointId, S>,
}

impl<S: Scalar> Dataset<S> {
    pub fn new() -> Self {
        Self {
            values: BTreeMap::new(),
        }
    }

    /// Samples `f` at every point of `grid`.
    pub fn sample(grid: &SparseGrid<S>, mut f: impl FnMut(&[S]) -> S) -> Self {
        grid.points().map(|p| (p.id.clone(), f(&p.coords))).collect()
    }

    pub fn insert(&mut self, id: PointId, value: S) -> Option<S> {
        self.values.insert(id, value)
    }

    pub fn get(&self, id: &PointId) -> Option<S> {
        self.values.get(id).copied()
    }

    pub fn contains(&self, id: &PointId) -> bool {
        self.values.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PointId, S)> + '_ {
        self.values.iter().map(|(k, &v)| (k, v))
    }

    /// Errors with the first grid point lacking a value.
    pub fn check_covers(&self, grid: &SparseGrid<S>) -> Result<()> {
        match grid.ids().find(|id| !self.values.contains_key(*id)) {
            Some(id) => Err(Error::IncompleteDataset(id.to_string())),
            None => Ok(()),
        }
    }

    /// The values at the points of `grid` only.
    pub fn restrict(&self, grid: &SparseGrid<S>) -> Result<Self> {
        self.check_covers(grid)?;
        Ok(grid
            .ids()
            .map(|id| (id.clone(), self.values[id]))
            .collect())
    }

    /// Pointwise `alpha * self + beta * other` over the shared keys.
    pub fn combine(&self, alpha: S, other: &Self, beta: S) -> Result<Self> {
        self.values
            .iter()
            .map(|(id, &v)| {
                let w = other
                    .get(id)
                    .ok_or_else(|| Error::IncompleteDataset(id.to_string()))?;
                Ok((id.clone(), alpha * v + beta * w))
            })
            .collect()
    }
}

impl<S> FromIterator<(PointId, S)> for Dataset<S> {
    fn from_iter<I: IntoIterator<Item = (PointId, S)>>(iter: I) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(d: usize) -> Domain<f64> {
        Domain::cube(0.0, 1.0, d).unwrap()
    }

    // Brute force: union of all tensor grids over the whole total-degree set,
    // with coordinates deduplicated by rounding. Independent of the canonical
    // id machinery.
    fn brute_force_count(d: usize, w: usize) -> usize {
        fn cc(level: usize) -> Vec<f64> {
            if level == 1 {
                return vec![0.0];
            }
            let m = (1usize << (level - 1)) + 1;
            (0..m)
                .map(|j| (std::f64::consts::PI * j as f64 / (m - 1) as f64).cos())
                .collect()
        }
        let mut seen = std::collections::HashSet::new();
        for idx in total_degree_index_set(d, w).unwrap() {
            let mut partial: Vec<Vec<i64>> = vec![vec![]];
            for &level in idx.entries() {
                partial = partial
                    .into_iter()
                    .flat_map(|prefix| {
                        cc(level).into_iter().map(move |v| {
                            let mut next = prefix.clone();
                            next.push((v * 1e9).round() as i64);
                            next
                        })
                    })
                    .collect();
            }
            seen.extend(partial);
        }
        seen.len()
    }

    #[test]
    fn anchor_counts() {
        let pi = std::f64::consts::PI;
        let ish = Domain::cube(-pi, pi, 3).unwrap();
        assert_eq!(SparseGrid::build(3, 1, ish.clone()).unwrap().len(), 7);
        assert_eq!(SparseGrid::build(3, 2, ish.clone()).unwrap().len(), 25);
        assert_eq!(SparseGrid::build(3, 3, ish).unwrap().len(), 69);
        let g2 = SparseGrid::build(4, 2, unit(4)).unwrap();
        let g3 = SparseGrid::build(4, 3, unit(4)).unwrap();
        assert_eq!(g3.len() - g2.len(), 96);
    }

    #[test]
    fn counts_match_brute_force() {
        for d in 1..=4 {
            for w in 0..=4 {
                let g = SparseGrid::build(d, w, unit(d)).unwrap();
                assert_eq!(g.len(), brute_force_count(d, w), "d={d} w={w}");
            }
        }
    }

    #[test]
    fn level_zero_is_centre() {
        let g = SparseGrid::build(3, 0, Domain::cube(-2.0, 4.0, 3).unwrap()).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.points().next().unwrap().coords, vec![1.0, 1.0, 1.0]);
        assert_eq!(g.terms().len(), 1);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            SparseGrid::build(3, 1, unit(2)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn coordinates_follow_affine_map() {
        let dom = Domain::from_flat(&[-1.0, 3.0, 10.0, 11.0]).unwrap();
        let g = SparseGrid::build(2, 3, dom.clone()).unwrap();
        for p in g.points() {
            for (k, node) in p.id.nodes().iter().enumerate() {
                let (lo, hi) = dom.intervals()[k];
                let v = (std::f64::consts::PI * node.fraction::<f64>()).cos();
                let expected = lo + (hi - lo) * (v + 1.0) / 2.0;
                assert!((p.coords[k] - expected).abs() < 1e-14);
            }
            assert!(dom.contains(&p.coords));
        }
    }

    #[test]
    fn point_id_text_form() {
        let id: PointId = "1/2;0/1;1/1".parse().unwrap();
        assert_eq!(id.dimension(), 3);
        assert_eq!(id.to_string(), "1/2;0/1;1/1");
        assert!("1/2;;1/1".parse::<PointId>().is_err());
        assert!("".parse::<PointId>().is_err());
        assert!("3/4;1/3".parse::<PointId>().is_err());
    }

    #[test]
    fn dataset_coverage_and_restriction() {
        let g1 = SparseGrid::build(2, 1, unit(2)).unwrap();
        let g2 = SparseGrid::build(2, 2, unit(2)).unwrap();
        let data = Dataset::sample(&g2, |x| x[0] + 2.0 * x[1]);
        assert!(data.check_covers(&g1).is_ok());
        let restricted = data.restrict(&g1).unwrap();
        assert_eq!(restricted.len(), g1.len());

        let mut partial = restricted.clone();
        let missing = g2.ids().find(|id| !g1.contains(id)).unwrap().clone();
        assert!(partial.get(&missing).is_none());
        match partial.check_covers(&g2) {
            Err(Error::IncompleteDataset(id)) => assert!(g2.contains(&id.parse().unwrap())),
            other => panic!("unexpected {other:?}"),
        }
        partial.insert(missing.clone(), 1.0);
        assert_eq!(partial.get(&missing), Some(1.0));
    }
}
