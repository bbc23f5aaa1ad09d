use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spatial::{Axis, SplitOperators, HALF_BANDWIDTH};

use super::banded::ComplexBandedLu;

/// Factorized 1-D block `−k·d·B − c·I` of the shifted system `(k·A_axis − c·I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedFactorization {
    lu: ComplexBandedLu,
    axis: Axis,
    species: usize,
    pole: Complex64,
    k: f64,
}

/// Factorizes `k·A_axis − c·I` restricted to one 1-D line of species `species`.
pub fn factorize_axis(
    ops: &SplitOperators,
    k: f64,
    c: Complex64,
    axis: Axis,
    species: usize,
) -> Result<BandedFactorization> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {k}")));
    }
    if species >= ops.species() {
        return Err(Error::Domain(format!("species {species} out of range")));
    }
    let b = ops.axis_operator();
    let kd = k * ops.diffusion()[species];
    let lu = ComplexBandedLu::factorize(b.dim(), HALF_BANDWIDTH, HALF_BANDWIDTH, |i, j| {
        let mut v = Complex64::new(-kd * b.get(i, j), 0.0);
        if i == j {
            v -= c;
        }
        v
    })
    .map_err(|e| Error::Singular(format!("pole {c}, axis {axis:?}, species {species}: {e}")))?;
    Ok(BandedFactorization {
        lu,
        axis,
        species,
        pole: c,
        k,
    })
}

impl BandedFactorization {
    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn species(&self) -> usize {
        self.species
    }

    pub fn pole(&self) -> Complex64 {
        self.pole
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn p1d(&self) -> usize {
        self.lu.dim()
    }

    /// The 1-D factorization, for direct line solves.
    pub fn line_lu(&self) -> &ComplexBandedLu {
        &self.lu
    }

    /// In-place solve for one species block of length `p²`.
    ///
    /// With `parallel`, independent lines are distributed over the current
    /// rayon pool; results are bit-identical to the sequential path.
    pub fn solve_block(&self, block: &mut [Complex64], parallel: bool) {
        let p = self.lu.dim();
        match (self.axis, parallel) {
            (Axis::X, false) => block.chunks_exact_mut(p).for_each(|run| self.lu.solve_strided(run, 1)),
            (Axis::X, true) => block.par_chunks_exact_mut(p).for_each(|run| self.lu.solve_strided(run, 1)),
            (Axis::Y, false) => self.lu.solve_rows(block, p),
            (Axis::Y, true) => {
                // gather column panels, solve them row-wise, scatter back
                let panel = 16.max(p / rayon::current_num_threads().max(1));
                let starts: Vec<usize> = (0..p).step_by(panel).collect();
                let solved: Vec<(usize, usize, Vec<Complex64>)> = starts
                    .par_iter()
                    .map(|&c0| {
                        let w = panel.min(p - c0);
                        let mut buf = Vec::with_capacity(p * w);
                        for j in 0..p {
                            buf.extend_from_slice(&block[j * p + c0..j * p + c0 + w]);
                        }
                        self.lu.solve_rows(&mut buf, w);
                        (c0, w, buf)
                    })
                    .collect();
                for (c0, w, buf) in solved {
                    for j in 0..p {
                        block[j * p + c0..j * p + c0 + w].copy_from_slice(&buf[j * w..(j + 1) * w]);
                    }
                }
            }
        }
    }
}

/// Solves `(k·A_axis − c·I) x = rhs` for one species block using `f`.
pub fn solve_axis_system(f: &BandedFactorization, rhs: &[Complex64], axis: Axis) -> Result<Vec<Complex64>> {
    if axis != f.axis {
        return Err(Error::Domain(format!(
            "factorization is for axis {:?}, requested {axis:?}",
            f.axis
        )));
    }
    let p = f.p1d();
    Error::check_len(p * p, rhs.len())?;
    let mut x = rhs.to_vec();
    f.solve_block(&mut x, false);
    Ok(x)
}

/// Cache of axis factorizations keyed by `(pole, axis, species)`.
#[derive(Debug, Clone, Default)]
pub struct AxisResolvents {
    factors: Vec<BandedFactorization>,
    block_len: usize,
    parallel: bool,
}

impl AxisResolvents {
    /// Factorizes every `(pole, axis)` pair for every species of `ops`.
    pub fn build(ops: &SplitOperators, k: f64, pairs: &[(Complex64, Axis)], parallel: bool) -> Result<Self> {
        let mut factors = Vec::with_capacity(pairs.len() * ops.species());
        for &(c, axis) in pairs {
            for s in 0..ops.species() {
                factors.push(factorize_axis(ops, k, c, axis, s)?);
            }
        }
        Ok(Self {
            factors,
            block_len: ops.block_len(),
            parallel,
        })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factorizations(&self) -> &[BandedFactorization] {
        &self.factors
    }

    fn find(&self, pole: Complex64, axis: Axis, species: usize) -> Result<&BandedFactorization> {
        self.factors
            .iter()
            .find(|f| f.pole == pole && f.axis == axis && f.species == species)
            .ok_or_else(|| Error::Singular(format!("no factorization for pole {pole}, axis {axis:?}")))
    }
}

impl super::SplitResolvent for AxisResolvents {
    fn solve_axis(&self, pole: Complex64, axis: Axis, rhs: &mut [Complex64]) -> Result<()> {
        let n = self.block_len;
        if n == 0 || !rhs.len().is_multiple_of(n) {
            return Err(Error::Shape {
                expected: n,
                got: rhs.len(),
            });
        }
        for (s, block) in rhs.chunks_exact_mut(n).enumerate() {
            self.find(pole, axis, s)?.solve_block(block, self.parallel);
        }
        Ok(())
    }
}
