//! Construction of the refined level-`w+1` model from a level-`w` baseline.
//!
//! The informed model interpolates `g`, which carries true values at the
//! selected points and baseline predictions everywhere else on the finer grid.
//! The correction model adds an interpolant of the selected-point residuals
//! to the baseline. The two agree up to roundoff.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{Dataset, GridPoint, Interpolant, PointId, SparseGrid};
use crate::scalar::Scalar;

/// Where a value of the hybrid dataset came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    TrueEval,
    SurrogateFill,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::TrueEval => "true_eval",
            Provenance::SurrogateFill => "surrogate_fill",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Values over the whole level-`w+1` grid, tagged `true_eval` exactly at the
/// selected points and `surrogate_fill` elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridDataset<S> {
    values: Dataset<S>,
    provenance: BTreeMap<PointId, Provenance>,
}

impl<S: Scalar> HybridDataset<S> {
    pub fn values(&self) -> &Dataset<S> {
        &self.values
    }

    pub fn provenance(&self, id: &PointId) -> Option<Provenance> {
        self.provenance.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PointId, S, Provenance)> + '_ {
        self.values
            .iter()
            .map(|(id, v)| (id, v, self.provenance[id]))
    }

    /// `(true_eval, surrogate_fill)` counts.
    pub fn counts(&self) -> (usize, usize) {
        let truth = self
            .provenance
            .values()
            .filter(|p| **p == Provenance::TrueEval)
            .count();
        (truth, self.provenance.len() - truth)
    }

    /// Replaces the value at `id` with a true evaluation.
    pub fn set_true(&mut self, id: &PointId, value: S) -> Result<()> {
        if !self.values.contains(id) {
            return Err(Error::UnknownPoint(id.to_string()));
        }
        self.values.insert(id.clone(), value);
        self.provenance.insert(id.clone(), Provenance::TrueEval);
        Ok(())
    }
}

/// Checks the shared preconditions and returns the selected ids.
fn check_inputs<S: Scalar>(
    grid_w1: &SparseGrid<S>,
    selected: &[GridPoint<S>],
    true_values: &Dataset<S>,
    baseline: &Interpolant<S>,
) -> Result<BTreeSet<PointId>> {
    if !baseline.grid().compatible_with(grid_w1) || baseline.level() + 1 != grid_w1.level() {
        return Err(Error::invalid(format!(
            "baseline (level {}) does not sit one level below the target grid (level {})",
            baseline.level(),
            grid_w1.level()
        )));
    }
    let ids: BTreeSet<PointId> = selected.iter().map(|p| p.id.clone()).collect();
    if let Some(id) = ids.iter().find(|id| !grid_w1.contains(id)) {
        return Err(Error::UnknownPoint(id.to_string()));
    }
    if let Some((id, _)) = true_values.iter().find(|(id, _)| !ids.contains(*id)) {
        return Err(Error::UnknownPoint(id.to_string()));
    }
    Ok(ids)
}

fn selected_true_value<S: Scalar>(
    id: &PointId,
    true_values: &Dataset<S>,
    baseline: &Interpolant<S>,
) -> Result<S> {
    baseline
        .data()
        .get(id)
        .or_else(|| true_values.get(id))
        .ok_or_else(|| Error::IncompleteSelection(id.to_string()))
}

/// Baseline value at a target-grid point, read from the base data when the
/// point is a base node.
fn baseline_value<S: Scalar>(point: &GridPoint<S>, baseline: &Interpolant<S>) -> Result<S> {
    match baseline.data().get(&point.id) {
        Some(v) => Ok(v),
        None => baseline.evaluate(&point.coords),
    }
}

/// Calls `f` at the selected points that are not base nodes and returns
/// those values. Base nodes already carry true values in the baseline data.
pub fn true_values_at<S: Scalar>(
    selected: &[GridPoint<S>],
    baseline: &Interpolant<S>,
    mut f: impl FnMut(&[S]) -> S,
) -> Dataset<S> {
    selected
        .iter()
        .filter(|p| !baseline.data().contains(&p.id))
        .map(|p| (p.id.clone(), f(&p.coords)))
        .collect()
}

/// The hybrid function `g` on the target grid: true values on `selected`,
/// baseline predictions elsewhere.
pub fn hybrid_values<S: Scalar>(
    grid_w1: &SparseGrid<S>,
    selected: &[GridPoint<S>],
    true_values_at_selected: &Dataset<S>,
    baseline: &Interpolant<S>,
) -> Result<HybridDataset<S>> {
    let ids = check_inputs(grid_w1, selected, true_values_at_selected, baseline)?;
    let mut values = Dataset::new();
    let mut provenance = BTreeMap::new();
    for point in grid_w1.points() {
        let (value, tag) = if ids.contains(&point.id) {
            (
                selected_true_value(&point.id, true_values_at_selected, baseline)?,
                Provenance::TrueEval,
            )
        } else {
            (baseline_value(point, baseline)?, Provenance::SurrogateFill)
        };
        values.insert(point.id.clone(), value);
        provenance.insert(point.id.clone(), tag);
    }
    Ok(HybridDataset { values, provenance })
}

/// The informed model: the target-level interpolant of the hybrid values.
pub fn build_informed<S: Scalar>(hybrid: &HybridDataset<S>, grid_w1: &SparseGrid<S>) -> Result<Interpolant<S>> {
    Interpolant::new(grid_w1.clone(), hybrid.values())
}

/// The residual `e = f_true - f_b` on `selected`, zero elsewhere on the
/// target grid.
pub fn error_function_values<S: Scalar>(
    grid_w1: &SparseGrid<S>,
    selected: &[GridPoint<S>],
    true_values_at_selected: &Dataset<S>,
    baseline: &Interpolant<S>,
) -> Result<Dataset<S>> {
    let ids = check_inputs(grid_w1, selected, true_values_at_selected, baseline)?;
    grid_w1
        .points()
        .map(|point| {
            let e = if ids.contains(&point.id) {
                let truth = selected_true_value(&point.id, true_values_at_selected, baseline)?;
                truth - baseline_value(point, baseline)?
            } else {
                S::zero()
            };
            Ok((point.id.clone(), e))
        })
        .collect()
}

/// Baseline plus an interpolated error correction.
#[derive(Clone, Debug)]
pub struct CorrectionModel<S> {
    pub base: Interpolant<S>,
    pub error_surrogate: Interpolant<S>,
}

impl<S: Scalar> CorrectionModel<S> {
    pub fn new(base: Interpolant<S>, grid_w1: &SparseGrid<S>, errors: &Dataset<S>) -> Result<Self> {
        let error_surrogate = Interpolant::new(grid_w1.clone(), errors)?;
        Ok(Self {
            base,
            error_surrogate,
        })
    }

    pub fn evaluate(&self, x: &[S]) -> Result<S> {
        build_corrected(self, x)
    }
}

/// `f_b(x) + E(x)`.
pub fn build_corrected<S: Scalar>(model: &CorrectionModel<S>, x: &[S]) -> Result<S> {
    Ok(model.base.evaluate(x)? + model.error_surrogate.evaluate(x)?)
}
