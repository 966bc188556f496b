//! Nested Clenshaw–Curtis sparse grids built with the total-degree Smolyak
//! combination technique, and their polynomial interpolants.

mod domain;
mod index;
mod interpolant;
mod node;
mod sparse;

pub use domain::Domain;
pub use index::{combination_coefficients, total_degree_index_set, MultiIndex};
pub use interpolant::Interpolant;
pub use node::{node_count, nodes_1d, CanonicalNode1D, MAX_LEVEL_1D};
pub use sparse::{Dataset, GridPoint, PointId, SparseGrid};
