//! Fourth-order exponential time differencing for 2-D reaction-diffusion
//! systems, with and without dimensional splitting.
//!
//! The crate is organised bottom-up:
//!
//! - [`spatial`]: fourth-order finite-difference Laplacian on a uniform
//!   tensor grid, stored as a 1-D banded axis operator.
//! - [`linsolve`]: complex banded LU for axis-structured shifted solves,
//!   sparse LU for the full 2-D operator, and a dense reference solver.
//! - [`steppers`]: ETDRK4P22-IF (split), ETDRK4P22 (unsplit), the
//!   third-order L-stable presmoother, SBDF4 and a dense exact ETDRK4 oracle.
//! - [`problems`]: the benchmark problem registry.
//! - [`analysis`]: error norms, observed orders and refinement studies.
//! - [`cli`]: the `etdsplit` benchmark harness.

pub mod analysis;
pub mod cli;
mod error;
mod field;
pub mod linsolve;
pub mod problems;
pub mod spatial;
pub mod steppers;

pub use error::{Error, Result};
pub use field::Field;
