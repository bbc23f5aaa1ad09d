//! Fourth-order finite-difference Laplacian on a uniform 2-D tensor grid.
//!
//! The 1-D operator `B ≈ ∂xx` is stored once as an [`AxisOperator`]; the
//! 2-D split operators are never densified:
//!
//! - `A1 = −d·(B acting along x)`, i.e. on contiguous x-runs,
//! - `A2 = −d·(B acting along y)`, i.e. with stride `p`,
//!
//! so `A = A1 + A2 ≈ −dΔ` and the semi-discrete system reads
//! `dU/dt + AU = F(U, t)`.

mod axis;
mod full;
mod grid;
mod split;

pub use axis::{build_axis_operator, AxisOperator, HALF_BANDWIDTH};
pub use full::{assemble_full, SparseOperator};
pub use grid::{BoundaryKind, Grid2D};
pub use split::{assemble_split, SplitOperators};

/// Coordinate direction of a split operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// `A1`, acting on contiguous x-runs.
    X,
    /// `A2`, acting on strided y-runs.
    Y,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X, Axis::Y];
}
