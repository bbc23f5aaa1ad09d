//! Time steppers for `dU/dt + AU = F(U, t)`.
//!
//! All ETD schemes are written as sequences of shifted solves
//! `(kA − cI)x = b` at fixed complex poles `c`, with real parts recombined
//! afterwards. Solves go through [`SplitResolvent`](crate::linsolve::SplitResolvent)
//! or [`FullResolvent`](crate::linsolve::FullResolvent), so the same step code
//! runs on banded, sparse or dense reference factorizations.

mod constants;
mod kernel;
mod plan;
mod reference;
mod sbdf;
mod smoother;
mod split;
mod unsplit;

pub use constants::{PadeConstants, SmootherConstants};
pub use kernel::Workspace;
pub use plan::{integrate, scheme_poles, step_count, Integration, PlanOptions, PlannedPole, Scheme, StepPlan};
pub use reference::{exact_etdrk4_reference_step, phi_functions, ExactEtdrk4};
pub use sbdf::{SbdfFactors, SBDF_STARTUP_SUBSTEPS};
pub use smoother::smoother_step;
pub use split::etdrk4p22if_step;
pub use unsplit::etdrk4p22_step;
