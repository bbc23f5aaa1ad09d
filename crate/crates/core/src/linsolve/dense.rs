use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spatial::{Axis, SplitOperators};

use super::{FullResolvent, SplitResolvent};

/// Largest dimension accepted by the dense reference paths.
pub const DENSE_MAX_DIM: usize = 64;

/// Row-major dense complex matrix for reference computations.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(n: usize, vals: &[f64]) -> Result<Self> {
        Error::check_len(n * n, vals.len())?;
        Ok(Self {
            n,
            data: vals.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// `alpha·self + beta·I`.
    pub fn shifted(&self, alpha: Complex64, beta: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= alpha;
        }
        for i in 0..self.n {
            out.data[i * self.n + i] += beta;
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| self.data[i * self.n..(i + 1) * self.n].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Direct solve of `M x = rhs` by Gaussian elimination with partial pivoting.
pub fn dense_reference_solve(m: &DenseMatrix, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n > DENSE_MAX_DIM {
        return Err(Error::TooLarge { n, max: DENSE_MAX_DIM });
    }
    Error::check_len(n, rhs.len())?;
    let mut a = m.data.clone();
    let mut x = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| a[p * n + col].norm().total_cmp(&a[q * n + col].norm()))
            .unwrap_or(col);
        if a[piv * n + col].norm() == 0.0 {
            return Err(Error::Singular(format!("dense pivot {col} is zero")));
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            x.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let l = a[r * n + col] / d;
            if l == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in col..n {
                let v = a[col * n + j];
                a[r * n + j] -= l * v;
            }
            let xc = x[col];
            x[r] -= l * xc;
        }
    }
    for r in (0..n).rev() {
        let mut acc = x[r];
        for j in r + 1..n {
            acc -= a[r * n + j] * x[j];
        }
        x[r] = acc / a[r * n + r];
    }
    Ok(x)
}

/// Dense per-species `A_x`, `A_y` blocks solved by [`dense_reference_solve`].
///
/// Reference implementation of both resolvent traits for small grids.
#[derive(Debug, Clone)]
pub struct DenseResolvent {
    k: f64,
    block_len: usize,
    /// `[species][axis]` with axis 0 = x, 1 = y.
    blocks: Vec<[DenseMatrix; 2]>,
}

impl DenseResolvent {
    pub fn new(ops: &SplitOperators, k: f64) -> Result<Self> {
        let n = ops.block_len();
        if n > DENSE_MAX_DIM {
            return Err(Error::TooLarge { n, max: DENSE_MAX_DIM });
        }
        let blocks = (0..ops.species())
            .map(|s| {
                Ok([
                    DenseMatrix::from_real(n, &ops.dense_axis(Axis::X, s))?,
                    DenseMatrix::from_real(n, &ops.dense_axis(Axis::Y, s))?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { k, block_len: n, blocks })
    }

    /// Dense `A = A_x + A_y` of one species.
    pub fn full_block(&self, species: usize) -> DenseMatrix {
        let [ax, ay] = &self.blocks[species];
        DenseMatrix::from_fn(self.block_len, |i, j| ax.get(i, j) + ay.get(i, j))
    }

    fn solve_with(&self, pole: Complex64, rhs: &mut [Complex64], mat: impl Fn(usize) -> DenseMatrix) -> Result<()> {
        Error::check_len(self.block_len * self.blocks.len(), rhs.len())?;
        let k = Complex64::new(self.k, 0.0);
        for (s, blk) in rhs.chunks_mut(self.block_len).enumerate() {
            let m = mat(s).shifted(k, -pole);
            let x = dense_reference_solve(&m, blk)?;
            blk.copy_from_slice(&x);
        }
        Ok(())
    }
}

impl SplitResolvent for DenseResolvent {
    fn solve_axis(&self, pole: Complex64, axis: Axis, rhs: &mut [Complex64]) -> Result<()> {
        let a = match axis {
            Axis::X => 0,
            Axis::Y => 1,
        };
        self.solve_with(pole, rhs, |s| self.blocks[s][a].clone())
    }
}

impl FullResolvent for DenseResolvent {
    fn solve_full(&self, pole: Complex64, rhs: &mut [Complex64]) -> Result<()> {
        self.solve_with(pole, rhs, |s| self.full_block(s))
    }
}
