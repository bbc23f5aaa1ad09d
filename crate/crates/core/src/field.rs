use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Real state vector over `species × p × p` unknowns.
///
/// Ordering is species-major, then y-major, with x fastest: the value of
/// species `s` at x-index `i`, y-index `j` lives at `s·p² + j·p + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    data: Vec<f64>,
    species: usize,
    p: usize,
}

impl Field {
    pub fn zeros(species: usize, p: usize) -> Self {
        Self {
            data: vec![0.0; species * p * p],
            species,
            p,
        }
    }

    pub fn from_vec(species: usize, p: usize, data: Vec<f64>) -> Result<Self> {
        Error::check_len(species * p * p, data.len())?;
        Ok(Self { data, species, p })
    }

    pub fn from_fn(species: usize, p: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(species * p * p);
        for s in 0..species {
            for j in 0..p {
                for i in 0..p {
                    data.push(f(s, i, j));
                }
            }
        }
        Self { data, species, p }
    }

    pub fn species(&self) -> usize {
        self.species
    }

    /// Unknowns per axis.
    pub fn p1d(&self) -> usize {
        self.p
    }

    pub fn block_len(&self) -> usize {
        self.p * self.p
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn block(&self, species: usize) -> &[f64] {
        let n = self.block_len();
        &self.data[species * n..(species + 1) * n]
    }

    pub fn block_mut(&mut self, species: usize) -> &mut [f64] {
        let n = self.block_len();
        &mut self.data[species * n..(species + 1) * n]
    }

    pub fn at(&self, species: usize, i: usize, j: usize) -> f64 {
        self.data[species * self.p * self.p + j * self.p + i]
    }

    /// Values of one species along the x axis at fixed y-index `j`.
    pub fn x_run(&self, species: usize, j: usize) -> &[f64] {
        let start = species * self.p * self.p + j * self.p;
        &self.data[start..start + self.p]
    }

    /// Values of one species along the y axis at fixed x-index `i`.
    pub fn y_run(&self, species: usize, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.block(species).iter().skip(i).step_by(self.p).copied()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub(crate) fn same_shape(&self, other: &Field) -> Result<()> {
        if self.species == other.species && self.p == other.p {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: self.len(),
                got: other.len(),
            })
        }
    }
}

impl Index<usize> for Field {
    type Output = f64;

    fn index(&self, idx: usize) -> &f64 {
        &self.data[idx]
    }
}

impl IndexMut<usize> for Field {
    fn index_mut(&mut self, idx: usize) -> &mut f64 {
        &mut self.data[idx]
    }
}
