use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Homogeneous boundary closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// `u = 0` on the boundary; only the `m` interior nodes are unknowns.
    Dirichlet,
    /// `∂u/∂n = 0`; all `m + 2` nodes are unknowns.
    Neumann,
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryKind::Dirichlet => "dirichlet",
            BoundaryKind::Neumann => "neumann",
        })
    }
}

impl FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" => Ok(BoundaryKind::Dirichlet),
            "neumann" => Ok(BoundaryKind::Neumann),
            other => Err(Error::Config(format!("unknown boundary kind `{other}`"))),
        }
    }
}

/// Uniform tensor-product grid on `[a, b]²` with `m + 2` nodes per axis,
/// `x_j = a + j·h`, `h = (b − a)/(m + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    a: f64,
    b: f64,
    m: usize,
    h: f64,
    bc: BoundaryKind,
}

impl Grid2D {
    pub const MIN_INTERIOR: usize = 3;

    pub fn new(a: f64, b: f64, m: usize, bc: BoundaryKind) -> Result<Self> {
        if m < Self::MIN_INTERIOR {
            return Err(Error::Domain(format!("need m >= 3 interior nodes, got {m}")));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Domain(format!("empty domain [{a}, {b}]")));
        }
        let h = (b - a) / (m + 1) as f64;
        Ok(Self { a, b, m, h, bc })
    }

    /// Grid with `cells = m + 1` mesh intervals per axis.
    pub fn with_cells(a: f64, b: f64, cells: usize, bc: BoundaryKind) -> Result<Self> {
        if cells == 0 {
            return Err(Error::Domain("need at least one cell".into()));
        }
        Self::new(a, b, cells - 1, bc)
    }

    /// Grid whose mesh width is the closest realizable one to `h_target`:
    /// `m + 1 = round((b − a)/h_target)`.
    pub fn from_target_h(a: f64, b: f64, h_target: f64, bc: BoundaryKind) -> Result<Self> {
        if !(h_target > 0.0 && h_target.is_finite()) {
            return Err(Error::Domain(format!("mesh width must be positive, got {h_target}")));
        }
        let cells = ((b - a) / h_target).round() as usize;
        Self::with_cells(a, b, cells, bc)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Interior nodes per axis.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cells(&self) -> usize {
        self.m + 1
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn bc(&self) -> BoundaryKind {
        self.bc
    }

    /// Unknowns per axis: `m` (Dirichlet) or `m + 2` (Neumann).
    pub fn p1d(&self) -> usize {
        match self.bc {
            BoundaryKind::Dirichlet => self.m,
            BoundaryKind::Neumann => self.m + 2,
        }
    }

    /// Unknowns per species.
    pub fn unknowns(&self) -> usize {
        self.p1d() * self.p1d()
    }

    /// Node index `j` (in `0..=m+1`) of the unknown at axis position `idx`.
    pub fn node_of(&self, idx: usize) -> usize {
        match self.bc {
            BoundaryKind::Dirichlet => idx + 1,
            BoundaryKind::Neumann => idx,
        }
    }

    /// Coordinate of the unknown at axis position `idx`.
    pub fn coord(&self, idx: usize) -> f64 {
        self.a + self.node_of(idx) as f64 * self.h
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.p1d()).map(|i| self.coord(i)).collect()
    }
}
