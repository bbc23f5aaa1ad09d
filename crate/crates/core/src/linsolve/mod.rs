//! Shifted linear solves `(k·A_axis − c·I) x = b` and `(k·A − c·I) x = b`.
//!
//! Split schemes factor only the 1-D blocks `−k·d·B − c·I` (complex banded
//! LU); unsplit schemes factor the assembled 2-D operator (sparse LU). The
//! dense solver is a reference for tests.

mod axis;
mod banded;
mod dense;
mod sparse;

use num_complex::Complex64;

use crate::error::Result;
use crate::spatial::Axis;

pub use axis::{factorize_axis, solve_axis_system, AxisResolvents, BandedFactorization};
pub use banded::ComplexBandedLu;
pub use dense::{dense_reference_solve, DenseMatrix, DenseResolvent, DENSE_MAX_DIM};
pub use sparse::{factorize_full, factorize_full_real, solve_full, FullResolvents, SparseFactorization};

/// Solves `(k·A_axis − c·I) x = rhs` in place over every species block.
pub trait SplitResolvent: Sync {
    fn solve_axis(&self, pole: Complex64, axis: Axis, rhs: &mut [Complex64]) -> Result<()>;
}

/// Solves `(k·A − c·I) x = rhs` in place over the whole field.
pub trait FullResolvent: Sync {
    fn solve_full(&self, pole: Complex64, rhs: &mut [Complex64]) -> Result<()>;
}
