use faer::sparse::{SparseColMat, Triplet};

use crate::error::{Error, Result};
use crate::field::Field;

use super::grid::Grid2D;
use super::split::{assemble_split, SplitOperators};

/// Assembled `A = A1 + A2` over all species, in compressed-row form.
///
/// Species blocks are decoupled, so the matrix is block diagonal. Entries
/// are kept as integer stencil weights times a per-species factor
/// `−d_s/(12h²)`, so Neumann rows cancel exactly on constants.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    n: usize,
    block: usize,
    factors: Vec<f64>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    weights: Vec<f64>,
}

/// Assembles the unsplit operator used by ETDRK4P22, the smoother and SBDF4.
pub fn assemble_full(grid: &Grid2D, diffusion: &[f64]) -> Result<SparseOperator> {
    Ok(SparseOperator::from_split(&assemble_split(grid, diffusion)?))
}

impl SparseOperator {
    pub fn from_split(ops: &SplitOperators) -> Self {
        let b = ops.axis_operator();
        let p = ops.p1d();
        let nb = p * p;
        let n = ops.species() * nb;
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(n * 9);
        let mut weights = Vec::with_capacity(n * 9);
        row_ptr.push(0);
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(16);
        for s in 0..ops.species() {
            let base = s * nb;
            for j in 0..p {
                for i in 0..p {
                    entries.clear();
                    for (c, w) in b.row_entries(i) {
                        entries.push((base + j * p + c, w));
                    }
                    for (c, w) in b.row_entries(j) {
                        entries.push((base + c * p + i, w));
                    }
                    entries.sort_by_key(|e| e.0);
                    let mut q = 0;
                    while q < entries.len() {
                        let (col, mut v) = entries[q];
                        q += 1;
                        while q < entries.len() && entries[q].0 == col {
                            v += entries[q].1;
                            q += 1;
                        }
                        cols.push(col);
                        weights.push(v);
                    }
                    row_ptr.push(cols.len());
                }
            }
        }
        let factors = ops.diffusion().iter().map(|d| -d * b.scale()).collect();
        Self {
            n,
            block: nb,
            factors,
            row_ptr,
            cols,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.weights.len()
    }

    fn row_weights(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.weights[span].iter().copied())
    }

    /// Columns and values of the nonzeros in row `r`.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let f = self.factors[r / self.block];
        self.row_weights(r).map(move |(c, w)| (c, f * w))
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        Error::check_len(self.n, x.len())?;
        Error::check_len(self.n, y.len())?;
        for (r, out) in y.iter_mut().enumerate() {
            let acc: f64 = self.row_weights(r).map(|(c, w)| w * x[c]).sum();
            *out = self.factors[r / self.block] * acc;
        }
        Ok(())
    }

    pub fn apply(&self, u: &Field) -> Result<Field> {
        let mut out = vec![0.0; u.len()];
        self.matvec(u.as_slice(), &mut out)?;
        Field::from_vec(u.species(), u.p1d(), out)
    }

    /// Dense row-major copy, for tests and oracles.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for r in 0..self.n {
            for (c, v) in self.row(r) {
                out[r * self.n + c] = v;
            }
        }
        out
    }

    /// `scale·A + shift·I` as a faer column-major sparse matrix.
    pub(crate) fn shifted<T>(&self, scale: T, shift: T) -> Result<SparseColMat<usize, T>>
    where
        T: faer::traits::ComplexField + Copy + std::ops::Mul<Output = T> + std::ops::Add<Output = T> + From<f64>,
    {
        let mut triplets = Vec::with_capacity(self.nnz() + self.n);
        for r in 0..self.n {
            let mut diag_seen = false;
            for (c, v) in self.row(r) {
                let mut val = scale * T::from(v);
                if c == r {
                    val += shift;
                    diag_seen = true;
                }
                triplets.push(Triplet::new(r, c, val));
            }
            if !diag_seen {
                triplets.push(Triplet::new(r, r, shift));
            }
        }
        SparseColMat::try_new_from_triplets(self.n, self.n, &triplets)
            .map_err(|e| Error::Sparse(format!("{e:?}")))
    }
}
