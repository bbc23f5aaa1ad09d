use crate::error::{Error, Result};
use crate::field::Field;

use super::axis::{build_axis_operator, AxisOperator};
use super::grid::Grid2D;
use super::Axis;

/// Implicit split operators `A1 = −d_s·B_x`, `A2 = −d_s·B_y` for each species.
#[derive(Debug, Clone)]
pub struct SplitOperators {
    grid: Grid2D,
    diffusion: Vec<f64>,
    axis_op: AxisOperator,
}

/// Assembles the split operators for `grid` and per-species diffusion
/// coefficients.
pub fn assemble_split(grid: &Grid2D, diffusion: &[f64]) -> Result<SplitOperators> {
    if diffusion.is_empty() {
        return Err(Error::Domain("need at least one species".into()));
    }
    if let Some(d) = diffusion.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
        return Err(Error::Domain(format!("diffusion coefficient must be positive, got {d}")));
    }
    let axis_op = build_axis_operator(grid.m(), grid.h(), grid.bc())?;
    Ok(SplitOperators {
        grid: *grid,
        diffusion: diffusion.to_vec(),
        axis_op,
    })
}

impl SplitOperators {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn axis_operator(&self) -> &AxisOperator {
        &self.axis_op
    }

    pub fn diffusion(&self) -> &[f64] {
        &self.diffusion
    }

    pub fn species(&self) -> usize {
        self.diffusion.len()
    }

    pub fn p1d(&self) -> usize {
        self.axis_op.dim()
    }

    pub fn block_len(&self) -> usize {
        self.p1d() * self.p1d()
    }

    pub fn field_len(&self) -> usize {
        self.species() * self.block_len()
    }

    /// `out = A_axis · block` for one species block of length `p²`.
    pub fn apply_axis_block(&self, block: &[f64], axis: Axis, species: usize, out: &mut [f64]) {
        let p = self.p1d();
        let factor = -self.diffusion[species];
        match axis {
            Axis::X => {
                for (x, y) in block.chunks_exact(p).zip(out.chunks_exact_mut(p)) {
                    self.axis_op.apply_strided(x, y, 1, factor);
                }
            }
            Axis::Y => {
                for i in 0..p {
                    self.axis_op.apply_strided(&block[i..], &mut out[i..], p, factor);
                }
            }
        }
    }

    /// `−d_s·B` applied along `axis` of species block `species` of `u`.
    pub fn apply_axis(&self, u: &Field, axis: Axis, species: usize) -> Result<Vec<f64>> {
        self.check_field(u)?;
        if species >= self.species() {
            return Err(Error::Domain(format!("species {species} out of range")));
        }
        let mut out = vec![0.0; self.block_len()];
        self.apply_axis_block(u.block(species), axis, species, &mut out);
        Ok(out)
    }

    /// `A u = (A1 + A2) u` over all species.
    pub fn apply(&self, u: &Field) -> Result<Field> {
        self.check_field(u)?;
        let n = self.block_len();
        let mut out = vec![0.0; u.len()];
        let mut tmp = vec![0.0; n];
        for s in 0..self.species() {
            let blk = u.block(s);
            let dst = &mut out[s * n..(s + 1) * n];
            self.apply_axis_block(blk, Axis::X, s, dst);
            self.apply_axis_block(blk, Axis::Y, s, &mut tmp);
            for (d, t) in dst.iter_mut().zip(&tmp) {
                *d += t;
            }
        }
        Field::from_vec(self.species(), self.p1d(), out)
    }

    /// Dense row-major `A_axis` for one species block (`p² × p²`).
    pub fn dense_axis(&self, axis: Axis, species: usize) -> Vec<f64> {
        let p = self.p1d();
        let n = p * p;
        let d = self.diffusion[species];
        let mut out = vec![0.0; n * n];
        for j in 0..p {
            for i in 0..p {
                let row = j * p + i;
                match axis {
                    Axis::X => {
                        for (c, _) in self.axis_op.row_entries(i) {
                            out[row * n + j * p + c] = -d * self.axis_op.get(i, c);
                        }
                    }
                    Axis::Y => {
                        for (c, _) in self.axis_op.row_entries(j) {
                            out[row * n + c * p + i] = -d * self.axis_op.get(j, c);
                        }
                    }
                }
            }
        }
        out
    }

    fn check_field(&self, u: &Field) -> Result<()> {
        if u.species() != self.species() || u.p1d() != self.p1d() {
            return Err(Error::Shape {
                expected: self.field_len(),
                got: u.len(),
            });
        }
        Ok(())
    }
}
