//! Smolyak interpolant `Σ_i c_i · T_i(x)` over a sparse grid.
//!
//! Each tensor-product term `T_i` is evaluated with the second (true) form of
//! the barycentric formula on Chebyshev extrema, whose weights are
//! `(-1)^j` with the two endpoint weights halved. Terms are summed in
//! lexicographic multi-index order and each tensor is contracted one
//! dimension at a time, last dimension first, so results do not depend on
//! evaluation schedule.

use crate::error::{Error, Result};
use crate::grid::node::{nodes_1d, CanonicalNode1D};
use crate::grid::sparse::{tensor_ids, Dataset, GridPoint, PointId, SparseGrid};
use crate::scalar::Scalar;

/// One-dimensional Clenshaw–Curtis rule on `[-1, 1]` with barycentric weights.
#[derive(Clone, Debug)]
struct Rule1D<S> {
    ids: Vec<CanonicalNode1D>,
    nodes: Vec<S>,
    weights: Vec<S>,
}

impl<S: Scalar> Rule1D<S> {
    fn new(level: usize) -> Result<Self> {
        let ids = nodes_1d(level)?;
        let nodes: Vec<S> = ids.iter().map(|n| n.reference_value()).collect();
        let m = nodes.len();
        let weights = (0..m)
            .map(|j| {
                let sign = if j % 2 == 0 { S::one() } else { -S::one() };
                if m > 1 && (j == 0 || j == m - 1) {
                    sign * S::lit(0.5)
                } else {
                    sign
                }
            })
            .collect();
        Ok(Self { ids, nodes, weights })
    }

    fn hit(&self, v: S) -> Option<usize> {
        let tol = S::node_hit_tolerance();
        self.nodes.iter().position(|&n| (v - n).abs() <= tol)
    }

    /// Lagrange basis values `ℓ_j(v)` for all nodes.
    fn basis(&self, v: S, out: &mut Vec<S>) {
        out.clear();
        let m = self.nodes.len();
        if m == 1 {
            out.push(S::one());
            return;
        }
        if let Some(hit) = self.hit(v) {
            out.extend((0..m).map(|j| if j == hit { S::one() } else { S::zero() }));
            return;
        }
        let mut denom = S::zero();
        for (&node, &w) in self.nodes.iter().zip(&self.weights) {
            let lambda = w / (v - node);
            out.push(lambda);
            denom = denom + lambda;
        }
        for b in out.iter_mut() {
            *b = *b / denom;
        }
    }
}

#[derive(Clone, Debug)]
struct Term<S> {
    coefficient: S,
    levels: Vec<usize>,
    /// Tensor values, last dimension varying fastest.
    values: Vec<S>,
}

/// A sparse grid paired with values at all of its points.
#[derive(Clone, Debug)]
pub struct Interpolant<S> {
    grid: SparseGrid<S>,
    data: Dataset<S>,
    terms: Vec<Term<S>>,
    rules: Vec<Rule1D<S>>,
}

impl<S: Scalar> Interpolant<S> {
    /// Pairs `grid` with `data`. Values for points outside the grid are
    /// ignored; a grid point without a value is an
    /// [`Error::IncompleteDataset`].
    pub fn new(grid: SparseGrid<S>, data: &Dataset<S>) -> Result<Self> {
        let data = data.restrict(&grid)?;
        if let Some((id, v)) = data.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite(format!("value {v} at grid point {id}")));
        }
        let max_level = grid
            .terms()
            .keys()
            .flat_map(|idx| idx.entries().iter().copied())
            .max()
            .unwrap_or(1);
        let rules = (1..=max_level).map(Rule1D::new).collect::<Result<Vec<_>>>()?;
        let terms = grid
            .terms()
            .iter()
            .map(|(index, &c)| {
                let values = tensor_ids(index)?
                    .iter()
                    .map(|id| data.get(id).ok_or_else(|| Error::IncompleteDataset(id.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term {
                    coefficient: S::lit(c as f64),
                    levels: index.entries().to_vec(),
                    values,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            data,
            terms,
            rules,
        })
    }

    /// Samples `f` on `grid` and builds the interpolant.
    pub fn from_fn(grid: SparseGrid<S>, f: impl FnMut(&[S]) -> S) -> Result<Self> {
        let data = Dataset::sample(&grid, f);
        Self::new(grid, &data)
    }

    pub fn grid(&self) -> &SparseGrid<S> {
        &self.grid
    }

    pub fn data(&self) -> &Dataset<S> {
        &self.data
    }

    pub fn level(&self) -> usize {
        self.grid.level()
    }

    pub fn dimension(&self) -> usize {
        self.grid.dimension()
    }

    /// Evaluates the interpolant at `x`, which must lie in the closed domain.
    ///
    /// A query that coincides with a grid point returns the stored value.
    pub fn evaluate(&self, x: &[S]) -> Result<S> {
        let domain = self.grid.domain();
        domain.check(x)?;
        let d = x.len();
        let reference: Vec<S> = x
            .iter()
            .enumerate()
            .map(|(k, &xk)| domain.to_reference(k, xk))
            .collect();

        if let Some(value) = self.stored_value_at(&reference) {
            return Ok(value);
        }

        // basis[k][l - 1]: 1D Lagrange basis of level l in dimension k.
        let mut basis: Vec<Vec<Vec<S>>> = Vec::with_capacity(d);
        for &v in &reference {
            let per_level = self
                .rules
                .iter()
                .map(|rule| {
                    let mut b = Vec::with_capacity(rule.nodes.len());
                    rule.basis(v, &mut b);
                    b
                })
                .collect();
            basis.push(per_level);
        }

        let mut scratch = Vec::new();
        let mut total = S::zero();
        for term in &self.terms {
            scratch.clear();
            scratch.extend_from_slice(&term.values);
            let mut len = scratch.len();
            for k in (0..d).rev() {
                let b = &basis[k][term.levels[k] - 1];
                let m = b.len();
                len /= m;
                for p in 0..len {
                    let mut acc = S::zero();
                    for (j, &bj) in b.iter().enumerate() {
                        acc = acc + bj * scratch[p * m + j];
                    }
                    scratch[p] = acc;
                }
            }
            total = total + term.coefficient * scratch[0];
        }
        Ok(total)
    }

    fn stored_value_at(&self, reference: &[S]) -> Option<S> {
        let finest = self.rules.last()?;
        let nodes = reference
            .iter()
            .map(|&v| finest.hit(v).map(|j| finest.ids[j]))
            .collect::<Option<Vec<_>>>()?;
        self.data.get(&PointId::new(nodes))
    }

    /// Evaluates at each point in order.
    pub fn evaluate_many<P: AsRef<[S]>>(&self, points: &[P]) -> Result<Vec<S>> {
        points.iter().map(|p| self.evaluate(p.as_ref())).collect()
    }

    /// Evaluates at a grid point given by its coordinates.
    pub fn evaluate_point(&self, point: &GridPoint<S>) -> Result<S> {
        self.evaluate(&point.coords)
    }
}
