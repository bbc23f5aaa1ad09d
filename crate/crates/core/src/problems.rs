//! Benchmark problems: model problems with exact solutions on Dirichlet and
//! Neumann grids, Michaelis–Menten enzyme kinetics (smooth and with
//! mismatched initial/boundary data) and the Brusselator.
//!
//! Every problem is written as `∂u/∂t = DΔu + f(u, t)` with the whole reaction
//! (including linear terms) kept in `f`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::spatial::{BoundaryKind, Grid2D};

/// Right-hand side `F(U, t)` of `dU/dt + AU = F`.
///
/// `u` and `out` are whole fields in species-major order.
pub trait Reaction: Sync + Send {
    fn eval(&self, u: &[f64], t: f64, out: &mut [f64]);
}

impl<F> Reaction for F
where
    F: Fn(&[f64], f64, &mut [f64]) + Sync + Send,
{
    fn eval(&self, u: &[f64], t: f64, out: &mut [f64]) {
        self(u, t, out)
    }
}

/// `F ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroReaction;

impl Reaction for ZeroReaction {
    fn eval(&self, _u: &[f64], _t: f64, out: &mut [f64]) {
        out.fill(0.0);
    }
}

/// Brusselator feed rate (the chemical parameter usually written `A`).
pub const BRUSSELATOR_ALPHA: f64 = 1.0;
/// Brusselator reaction rate (usually written `B`).
pub const BRUSSELATOR_BETA: f64 = 3.4;
/// Brusselator diffusion coefficient, both species.
pub const BRUSSELATOR_DIFFUSION: f64 = 2e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    /// `u_t = Δu − u` on `(−π/2, π/2)²`, homogeneous Dirichlet.
    ModelDirichlet,
    /// `u_t = Δu − u` on `(−π, π)²`, homogeneous Neumann.
    ModelNeumann,
    /// `u_t = 0.25Δu − u/(1+u)` on `(0, 1)²`, Dirichlet, `u₀ = sin πx sin πy`.
    Enzyme,
    /// `u_t = Δu − u/(1+u)` on `(0, 1)²`, Dirichlet, `u₀ ≡ 1`.
    EnzymeNonsmooth,
    /// Two-species Brusselator on `(0, 1)²`, Neumann.
    Brusselator,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::ModelDirichlet,
        ProblemKind::ModelNeumann,
        ProblemKind::Enzyme,
        ProblemKind::EnzymeNonsmooth,
        ProblemKind::Brusselator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::ModelDirichlet => "model_dirichlet",
            ProblemKind::ModelNeumann => "model_neumann",
            ProblemKind::Enzyme => "enzyme",
            ProblemKind::EnzymeNonsmooth => "enzyme_nonsmooth",
            ProblemKind::Brusselator => "brusselator",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

/// Fully specified benchmark problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    /// Domain `(a, b)²`.
    pub a: f64,
    pub b: f64,
    pub bc: BoundaryKind,
    pub diffusion: Vec<f64>,
    pub final_time: f64,
    /// Mesh intervals per axis used when no grid is requested explicitly.
    pub default_cells: usize,
}

/// Looks up a problem by its registry name.
pub fn make_problem(name: &str) -> Result<ProblemSpec> {
    Ok(ProblemSpec::new(name.parse()?))
}

impl ProblemSpec {
    pub fn new(kind: ProblemKind) -> Self {
        use ProblemKind::*;
        let (a, b, bc, diffusion, final_time, default_cells) = match kind {
            ModelDirichlet => (-FRAC_PI_2, FRAC_PI_2, BoundaryKind::Dirichlet, vec![1.0], 1.0, 40),
            ModelNeumann => (-PI, PI, BoundaryKind::Neumann, vec![1.0], 1.0, 63),
            Enzyme => (0.0, 1.0, BoundaryKind::Dirichlet, vec![0.25], 1.0, 20),
            EnzymeNonsmooth => (0.0, 1.0, BoundaryKind::Dirichlet, vec![1.0], 1.0, 20),
            Brusselator => (
                0.0,
                1.0,
                BoundaryKind::Neumann,
                vec![BRUSSELATOR_DIFFUSION, BRUSSELATOR_DIFFUSION],
                2.0,
                80,
            ),
        };
        Self {
            kind,
            a,
            b,
            bc,
            diffusion,
            final_time,
            default_cells,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn species(&self) -> usize {
        self.diffusion.len()
    }

    pub fn has_exact(&self) -> bool {
        matches!(self.kind, ProblemKind::ModelDirichlet | ProblemKind::ModelNeumann)
    }

    pub fn grid_with_cells(&self, cells: usize) -> Result<Grid2D> {
        Grid2D::with_cells(self.a, self.b, cells, self.bc)
    }

    pub fn grid_for_h(&self, h: f64) -> Result<Grid2D> {
        Grid2D::from_target_h(self.a, self.b, h, self.bc)
    }

    pub fn default_grid(&self) -> Result<Grid2D> {
        self.grid_with_cells(self.default_cells)
    }

    /// Pointwise reaction at one node; `u` and `out` hold one value per species.
    pub fn reaction_at(&self, u: &[f64], out: &mut [f64]) {
        match self.kind {
            ProblemKind::ModelDirichlet | ProblemKind::ModelNeumann => out[0] = -u[0],
            ProblemKind::Enzyme | ProblemKind::EnzymeNonsmooth => out[0] = -u[0] / (1.0 + u[0]),
            ProblemKind::Brusselator => {
                let (x, y) = (u[0], u[1]);
                let x2y = x * x * y;
                out[0] = BRUSSELATOR_ALPHA + x2y - (BRUSSELATOR_BETA + 1.0) * x;
                out[1] = BRUSSELATOR_BETA * x - x2y;
            }
        }
    }

    pub fn eval_reaction(&self, u: &Field, t: f64) -> Result<Field> {
        if u.species() != self.species() {
            return Err(Error::Shape {
                expected: self.species() * u.block_len(),
                got: u.len(),
            });
        }
        let mut out = Field::zeros(u.species(), u.p1d());
        self.eval(u.as_slice(), t, out.as_mut_slice());
        Ok(out)
    }

    pub fn eval_initial(&self, grid: &Grid2D) -> Field {
        let x = grid.coords();
        Field::from_fn(self.species(), grid.p1d(), |s, i, j| {
            let (x, y) = (x[i], x[j]);
            match self.kind {
                ProblemKind::ModelDirichlet | ProblemKind::ModelNeumann => x.cos() * y.cos(),
                ProblemKind::Enzyme => (PI * x).sin() * (PI * y).sin(),
                ProblemKind::EnzymeNonsmooth => 1.0,
                ProblemKind::Brusselator => {
                    if s == 0 {
                        0.5 + y
                    } else {
                        1.0 + 5.0 * x
                    }
                }
            }
        })
    }

    /// Exact solution on the grid unknowns, when the problem has one.
    pub fn eval_exact(&self, grid: &Grid2D, t: f64) -> Option<Field> {
        if !self.has_exact() {
            return None;
        }
        let x = grid.coords();
        let decay = (-3.0 * t).exp();
        Some(Field::from_fn(1, grid.p1d(), |_, i, j| decay * x[i].cos() * x[j].cos()))
    }

    /// Exact solution at a point, when the problem has one.
    pub fn exact_at(&self, x: f64, y: f64, t: f64) -> Option<f64> {
        self.has_exact().then(|| (-3.0 * t).exp() * x.cos() * y.cos())
    }
}

impl Reaction for ProblemSpec {
    fn eval(&self, u: &[f64], _t: f64, out: &mut [f64]) {
        let s = self.species();
        let n = u.len() / s;
        match s {
            1 => {
                for (o, &v) in out.iter_mut().zip(u) {
                    let mut r = [0.0];
                    self.reaction_at(&[v], &mut r);
                    *o = r[0];
                }
            }
            _ => {
                let mut vals = vec![0.0; s];
                let mut res = vec![0.0; s];
                for q in 0..n {
                    for c in 0..s {
                        vals[c] = u[c * n + q];
                    }
                    self.reaction_at(&vals, &mut res);
                    for c in 0..s {
                        out[c * n + q] = res[c];
                    }
                }
            }
        }
    }
}
