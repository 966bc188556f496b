//! Zero-cost discrepancy indicator and refinement-point selection.
//!
//! For a base grid of level `w` with data `D_w`, the candidates are the points
//! of the level-`w+1` grid not already in the base grid. Each candidate is
//! scored by comparing the level-`w` and level-`w-1` interpolants of the same
//! data, so scoring never calls the underlying function.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridPoint, Interpolant, SparseGrid};
use crate::scalar::Scalar;

/// Default `ε` separating the relative and absolute branches of the indicator.
pub const DEFAULT_EPSILON: f64 = 1e-12;

/// A scored candidate. `rank` is 1-based, 1 being the largest indicator.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedCandidate<S> {
    pub point: GridPoint<S>,
    pub delta: S,
    pub eta: S,
    pub rank: usize,
}

/// Points of `grid_w1` absent from `grid_w`, in canonical-id order.
pub fn candidate_set<S: Scalar>(grid_w: &SparseGrid<S>, grid_w1: &SparseGrid<S>) -> Result<Vec<GridPoint<S>>> {
    if !grid_w.compatible_with(grid_w1) {
        return Err(Error::invalid("base and target grids have different domains"));
    }
    if grid_w1.level() != grid_w.level() + 1 {
        return Err(Error::invalid(format!(
            "target level {} is not base level {} + 1",
            grid_w1.level(),
            grid_w.level()
        )));
    }
    Ok(grid_w1
        .points()
        .filter(|p| !grid_w.contains(&p.id))
        .cloned()
        .collect())
}

/// `|f_w(x) - f_{w-1}(x)|`.
pub fn discrepancy<S: Scalar>(f_w: &Interpolant<S>, f_wm1: &Interpolant<S>, x: &[S]) -> Result<S> {
    Ok((f_w.evaluate(x)? - f_wm1.evaluate(x)?).abs())
}

/// Hybrid relative/absolute indicator: `delta / |f_w|` when `|f_w| > ε`,
/// otherwise `delta`.
pub fn indicator<S: Scalar>(delta: S, fw_value: S, epsilon: S) -> Result<S> {
    if delta.is_nan() || delta < S::zero() {
        return Err(Error::invalid(format!("discrepancy must be >= 0, got {delta}")));
    }
    if epsilon.is_nan() || epsilon <= S::zero() {
        return Err(Error::invalid(format!("epsilon must be > 0, got {epsilon}")));
    }
    let magnitude = fw_value.abs();
    Ok(if magnitude > epsilon { delta / magnitude } else { delta })
}

/// The level-`w` and level-`w-1` interpolants of the same base data.
///
/// `f_{w-1}` uses the restriction of the base data to the coarser grid, which
/// is available because the grids are nested.
pub fn indicator_pair<S: Scalar>(base: &Interpolant<S>) -> Result<(Interpolant<S>, Interpolant<S>)> {
    if base.level() == 0 {
        return Err(Error::invalid(
            "the indicator needs a base level of at least 1 (level w-1 must exist)",
        ));
    }
    let coarse_grid = base.grid().coarser()?;
    let coarse = Interpolant::new(coarse_grid, base.data())?;
    Ok((base.clone(), coarse))
}

/// Scores every candidate and sorts by descending indicator. Ties keep
/// ascending canonical-id order.
pub fn rank_candidates<S: Scalar>(
    candidates: &[GridPoint<S>],
    f_w: &Interpolant<S>,
    f_wm1: &Interpolant<S>,
    epsilon: S,
) -> Result<Vec<RankedCandidate<S>>> {
    if f_w.grid().domain() != f_wm1.grid().domain() {
        return Err(Error::invalid("indicator interpolants have different domains"));
    }
    let mut scored = candidates
        .iter()
        .map(|p| {
            let fw = f_w.evaluate(&p.coords)?;
            let fwm1 = f_wm1.evaluate(&p.coords)?;
            let delta = (fw - fwm1).abs();
            let eta = indicator(delta, fw, epsilon)?;
            if !eta.is_finite() {
                return Err(Error::NonFinite(format!("indicator at candidate {}", p.id)));
            }
            Ok(RankedCandidate {
                point: p.clone(),
                delta,
                eta,
                rank: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|a, b| {
        b.eta
            .partial_cmp(&a.eta)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.point.id.cmp(&b.point.id))
    });
    for (i, c) in scored.iter_mut().enumerate() {
        c.rank = i + 1;
    }
    Ok(scored)
}

/// Candidate selection rule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "lowercase")]
pub enum Strategy {
    /// The `budget` highest-ranked candidates.
    Budget { budget: usize },
    /// Candidates with `η ≥ τ · η_max`.
    Threshold { tau: f64 },
    /// Ranks up to the knee of the sorted indicator curve.
    Elbow,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Budget { .. } => "budget",
            Strategy::Threshold { .. } => "threshold",
            Strategy::Elbow => "elbow",
        }
    }

    /// `B` or `τ`; `None` for the elbow rule.
    pub fn parameter(&self) -> Option<f64> {
        match *self {
            Strategy::Budget { budget } => Some(budget as f64),
            Strategy::Threshold { tau } => Some(tau),
            Strategy::Elbow => None,
        }
    }

    pub fn select<S: Scalar>(&self, ranked: &[RankedCandidate<S>]) -> Result<SelectionResult<S>> {
        match *self {
            Strategy::Budget { budget } => Ok(select_budget(ranked, budget)),
            Strategy::Threshold { tau } => select_threshold(ranked, tau),
            Strategy::Elbow => Ok(select_elbow(ranked)),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Budget { budget } => write!(f, "budget(B={budget})"),
            Strategy::Threshold { tau } => write!(f, "threshold(tau={tau})"),
            Strategy::Elbow => f.write_str("elbow"),
        }
    }
}

/// Outcome of a selection rule: always a prefix of the ranking.
#[derive(Clone, Debug, PartialEq)]
pub struct SelectionResult<S> {
    pub selected: Vec<GridPoint<S>>,
    pub strategy: Strategy,
    /// Largest indicator among the candidates; `None` when there are none.
    pub eta_max: Option<S>,
}

impl<S: Scalar> SelectionResult<S> {
    fn prefix(ranked: &[RankedCandidate<S>], count: usize, strategy: Strategy) -> Self {
        Self {
            selected: ranked[..count].iter().map(|c| c.point.clone()).collect(),
            strategy,
            eta_max: ranked.first().map(|c| c.eta),
        }
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }
}

pub fn select_budget<S: Scalar>(ranked: &[RankedCandidate<S>], budget: usize) -> SelectionResult<S> {
    SelectionResult::prefix(ranked, budget.min(ranked.len()), Strategy::Budget { budget })
}

pub fn select_threshold<S: Scalar>(ranked: &[RankedCandidate<S>], tau: f64) -> Result<SelectionResult<S>> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::invalid(format!("tau must lie in [0, 1], got {tau}")));
    }
    let strategy = Strategy::Threshold { tau };
    let Some(first) = ranked.first() else {
        return Ok(SelectionResult::prefix(ranked, 0, strategy));
    };
    let cutoff = S::lit(tau) * first.eta;
    let count = ranked.iter().take_while(|c| c.eta >= cutoff).count();
    Ok(SelectionResult::prefix(ranked, count, strategy))
}

/// Elbow of the curve `(k, η_k)`, `k = 1..N`: the rank with the largest
/// perpendicular distance to the chord from `(1, η_1)` to `(N, η_N)`.
/// Fewer than three candidates selects all; ties pick the smallest rank.
pub fn select_elbow<S: Scalar>(ranked: &[RankedCandidate<S>]) -> SelectionResult<S> {
    let etas: Vec<S> = ranked.iter().map(|c| c.eta).collect();
    SelectionResult::prefix(ranked, elbow_rank(&etas, false), Strategy::Elbow)
}

/// Like [`select_elbow`] but with both axes rescaled to `[0, 1]` first.
pub fn select_elbow_normalized<S: Scalar>(ranked: &[RankedCandidate<S>]) -> SelectionResult<S> {
    let etas: Vec<S> = ranked.iter().map(|c| c.eta).collect();
    SelectionResult::prefix(ranked, elbow_rank(&etas, true), Strategy::Elbow)
}

/// 1-based elbow rank of a non-increasing curve.
pub fn elbow_rank<S: Scalar>(etas: &[S], normalize: bool) -> usize {
    let n = etas.len();
    if n < 3 {
        return n;
    }
    let (x_scale, y_scale) = if normalize {
        let span = etas[0] - etas[n - 1];
        let y = if span > S::zero() { span } else { S::one() };
        (S::lit((n - 1) as f64), y)
    } else {
        (S::one(), S::one())
    };
    let point = |k: usize| (S::lit((k + 1) as f64) / x_scale, etas[k] / y_scale);
    let (x1, y1) = point(0);
    let (x2, y2) = point(n - 1);
    let (dx, dy) = (x2 - x1, y2 - y1);
    let norm = (dx * dx + dy * dy).sqrt();
    let mut best = 0;
    let mut best_distance = S::neg_infinity();
    for k in 0..n {
        let (x, y) = point(k);
        let distance = (dy * (x - x1) - dx * (y - y1)).abs() / norm;
        if distance > best_distance {
            best = k;
            best_distance = distance;
        }
    }
    best + 1
}

/// Perpendicular distances used by [`elbow_rank`] without normalization.
pub fn elbow_distances<S: Scalar>(etas: &[S]) -> Vec<S> {
    let n = etas.len();
    if n < 2 {
        return vec![S::zero(); n];
    }
    let (x1, y1) = (S::one(), etas[0]);
    let (x2, y2) = (S::lit(n as f64), etas[n - 1]);
    let (dx, dy) = (x2 - x1, y2 - y1);
    let norm = (dx * dx + dy * dy).sqrt();
    etas.iter()
        .enumerate()
        .map(|(k, &y)| (dy * (S::lit((k + 1) as f64) - x1) - dx * (y - y1)).abs() / norm)
        .collect()
}
