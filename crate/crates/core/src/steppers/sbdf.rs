//! Fourth-order semi-implicit BDF (SBDF4) with a fine-step SBDF1 startup.
//!
//! `(25I + 12kA)U⁺ = 48Uₙ − 36Uₙ₋₁ + 16Uₙ₋₂ − 3Uₙ₋₃ + k(48Fₙ − 72Fₙ₋₁ + 48Fₙ₋₂ − 12Fₙ₋₃)`

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linsolve::{factorize_full_real, AxisResolvents, SparseFactorization, SplitResolvent};
use crate::problems::Reaction;
use crate::spatial::{Axis, SparseOperator, SplitOperators};

/// SBDF1 substeps per step interval when generating the three starting values.
pub const SBDF_STARTUP_SUBSTEPS: usize = 2000;

const BDF4: [f64; 4] = [48.0, -36.0, 16.0, -3.0];
const AB4: [f64; 4] = [48.0, -72.0, 48.0, -12.0];

const STARTUP_MAX_SWEEPS: usize = 60;

/// Factorization of `25I + 12kA` and a solver for `I + k₀A`.
#[derive(Debug)]
pub struct SbdfFactors {
    main: SparseFactorization,
    start: StartupSolver,
    k: f64,
    k0: f64,
}

/// Solves `(I + k₀A)x = b`.
///
/// Iterates `x ← x + P⁻¹(b − (I + k₀A)x)` with the axis product
/// `P = (I + k₀A₁)(I + k₀A₂)`, whose defect `k₀²A₁A₂` is tiny for the startup
/// step, until the update is at round-off. A sparse LU is built on demand if
/// the iteration stalls.
#[derive(Debug)]
struct StartupSolver {
    ops: SplitOperators,
    axes: AxisResolvents,
    full: SparseOperator,
    k0: f64,
    lu: OnceLock<SparseFactorization>,
}

impl StartupSolver {
    fn new(ops: &SplitOperators, full: &SparseOperator, k0: f64) -> Result<Self> {
        let pole = Complex64::new(-1.0, 0.0);
        Ok(Self {
            ops: ops.clone(),
            axes: AxisResolvents::build(ops, k0, &[(pole, Axis::X), (pole, Axis::Y)], false)?,
            full: full.clone(),
            k0,
            lu: OnceLock::new(),
        })
    }

    fn sparse_lu(&self) -> Result<&SparseFactorization> {
        if let Some(f) = self.lu.get() {
            return Ok(f);
        }
        let f = factorize_full_real(&self.full, self.k0, 1.0)?;
        Ok(self.lu.get_or_init(|| f))
    }

    /// Overwrites `b` with the solution.
    fn solve(&self, b: &mut [f64]) -> Result<()> {
        Error::check_len(self.ops.field_len(), b.len())?;
        if self.lu.get().is_none() && self.iterate(b)? {
            return Ok(());
        }
        self.sparse_lu()?.solve_real(b)
    }

    fn iterate(&self, b: &mut [f64]) -> Result<bool> {
        let n = self.ops.block_len();
        let pole = Complex64::new(-1.0, 0.0);
        let mut x = b.to_vec();
        let mut ax = vec![0.0; n];
        let mut ay = vec![0.0; n];
        let mut z = vec![Complex64::new(0.0, 0.0); b.len()];
        let mut last = f64::INFINITY;
        for _ in 0..STARTUP_MAX_SWEEPS {
            for s in 0..self.ops.species() {
                let xs = &x[s * n..(s + 1) * n];
                self.ops.apply_axis_block(xs, Axis::X, s, &mut ax);
                self.ops.apply_axis_block(xs, Axis::Y, s, &mut ay);
                for q in 0..n {
                    let r = b[s * n + q] - xs[q] - self.k0 * (ax[q] + ay[q]);
                    z[s * n + q] = Complex64::new(r, 0.0);
                }
            }
            self.axes.solve_axis(pole, Axis::Y, &mut z)?;
            self.axes.solve_axis(pole, Axis::X, &mut z)?;
            let (mut dmax, mut xmax) = (0.0f64, 0.0f64);
            for (xq, zq) in x.iter_mut().zip(&z) {
                *xq += zq.re;
                dmax = dmax.max(zq.re.abs());
                xmax = xmax.max(xq.abs());
            }
            if !dmax.is_finite() {
                return Ok(false);
            }
            if dmax <= 4.0 * f64::EPSILON * xmax {
                b.copy_from_slice(&x);
                return Ok(true);
            }
            if dmax > 0.5 * last {
                return Ok(false);
            }
            last = dmax;
        }
        Ok(false)
    }
}

impl SbdfFactors {
    pub fn build(ops: &SplitOperators, a: &SparseOperator, k: f64) -> Result<Self> {
        let k0 = k / SBDF_STARTUP_SUBSTEPS as f64;
        Ok(Self {
            main: factorize_full_real(a, 12.0 * k, 25.0)?,
            start: StartupSolver::new(ops, a, k0)?,
            k,
            k0,
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn startup_step(&self) -> f64 {
        self.k0
    }

    /// One SBDF1 step `(I + k₀A)U⁺ = U + k₀F(U, t)`; `fu` is scratch.
    pub fn sbdf1_step<R: Reaction + ?Sized>(&self, reaction: &R, t: f64, u: &mut [f64], fu: &mut [f64]) -> Result<()> {
        reaction.eval(u, t, fu);
        for (u, f) in u.iter_mut().zip(fu.iter()) {
            *u += self.k0 * f;
        }
        self.start.solve(u)
    }

    /// Advances `u` by one full interval `k` with SBDF1 substeps.
    pub fn startup_interval<R: Reaction + ?Sized>(&self, reaction: &R, t: f64, u: &mut [f64], fu: &mut [f64]) -> Result<()> {
        for q in 0..SBDF_STARTUP_SUBSTEPS {
            self.sbdf1_step(reaction, t + q as f64 * self.k0, u, fu)?;
        }
        Ok(())
    }

    /// One SBDF4 step; `u[0]`/`f[0]` are the newest level.
    pub fn sbdf4_step(&self, u: [&[f64]; 4], f: [&[f64]; 4], out: &mut [f64]) -> Result<()> {
        for (q, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for l in 0..4 {
                acc += BDF4[l] * u[l][q] + self.k * AB4[l] * f[l][q];
            }
            *o = acc;
        }
        self.main.solve_real(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_sums() {
        // consistency: BDF weights reproduce 25·U for constants, AB weights sum to 12
        assert_eq!(BDF4.iter().sum::<f64>(), 25.0);
        assert_eq!(AB4.iter().sum::<f64>(), 12.0);
    }

    #[test]
    fn exact_on_linear_in_time_data() {
        // U(t) = c + t·F with A = 0 on a Neumann constant-preserving operator
        use crate::spatial::{assemble_split, BoundaryKind, Grid2D};
        let g = Grid2D::new(0.0, 1.0, 3, BoundaryKind::Neumann).unwrap();
        let ops = assemble_split(&g, &[1.0]).unwrap();
        let a = SparseOperator::from_split(&ops);
        let k = 0.1;
        let f = SbdfFactors::build(&ops, &a, k).unwrap();
        let n = a.dim();
        let level = |t: f64| vec![2.0 + 0.5 * t; n];
        let fval = vec![0.5; n];
        let hist: Vec<Vec<f64>> = (0..4).map(|l| level(0.3 - l as f64 * k)).collect();
        let mut out = vec![0.0; n];
        f.sbdf4_step(
            [&hist[0], &hist[1], &hist[2], &hist[3]],
            [&fval, &fval, &fval, &fval],
            &mut out,
        )
        .unwrap();
        for (o, e) in out.iter().zip(level(0.4)) {
            assert!((o - e).abs() < 1e-12);
        }
    }

    #[test]
    fn startup_solve_matches_sparse_lu() {
        use crate::spatial::{assemble_split, BoundaryKind, Grid2D};
        for bc in [BoundaryKind::Dirichlet, BoundaryKind::Neumann] {
            for k0 in [1e-5, 1e-3, 10.0] {
                let g = Grid2D::new(0.0, 1.0, 30, bc).unwrap();
                let ops = assemble_split(&g, &[1.0, 0.01]).unwrap();
                let a = SparseOperator::from_split(&ops);
                let solver = StartupSolver::new(&ops, &a, k0).unwrap();
                let b: Vec<f64> = (0..a.dim()).map(|q| (q as f64 * 0.37).sin() + 1.0).collect();
                let mut x = b.clone();
                solver.solve(&mut x).unwrap();
                let mut y = b.clone();
                factorize_full_real(&a, k0, 1.0).unwrap().solve_real(&mut y).unwrap();
                let diff = x.iter().zip(&y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
                assert!(diff < 1e-13, "{bc} k0={k0}: {diff}");
            }
        }
    }
}
