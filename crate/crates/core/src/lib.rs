//! Surrogate-informed refinement of sparse grid interpolants.
//!
//! A level-`w` Smolyak interpolant on nested Clenshaw–Curtis nodes is refined
//! towards level `w + 1` without evaluating the target function at every new
//! node. Candidates are ranked by the gap between the level-`w` and level-`w-1`
//! interpolants of the same data ([`refinement`]). Only the selected
//! candidates are evaluated, and the other new nodes are filled from the
//! baseline ([`surrogate`]).
//!
//! The numerical core is generic over [`Scalar`] (`f32`, `f64`). The aliases
//! below fix it to `f64`, which is what the [`harness`] and the file formats use.

pub mod benchmarks;
pub mod error;
pub mod grid;
pub mod harness;
pub mod refinement;
pub mod scalar;
pub mod surrogate;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Domain64 = grid::Domain<f64>;
pub type GridPoint64 = grid::GridPoint<f64>;
pub type SparseGrid64 = grid::SparseGrid<f64>;
pub type Dataset64 = grid::Dataset<f64>;
pub type Interpolant64 = grid::Interpolant<f64>;
pub type RankedCandidate64 = refinement::RankedCandidate<f64>;
pub type SelectionResult64 = refinement::SelectionResult<f64>;
pub type HybridDataset64 = surrogate::HybridDataset<f64>;
pub type CorrectionModel64 = surrogate::CorrectionModel<f64>;
pub type BenchmarkSpec64 = benchmarks::BenchmarkSpec<f64>;
