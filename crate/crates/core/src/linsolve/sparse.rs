use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::{c64, MatMut};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spatial::SparseOperator;

/// Sparse LU of a shifted full operator, complex `(k·A − c·I)` or real
/// `(α·A + β·I)`.
#[derive(Debug, Clone)]
pub enum SparseFactorization {
    Complex { lu: Lu<usize, c64>, n: usize },
    Real { lu: Lu<usize, f64>, n: usize },
}

/// Factorizes `k·A − c·I` with a complex pole `c`.
pub fn factorize_full(a: &SparseOperator, k: f64, c: Complex64) -> Result<SparseFactorization> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {k}")));
    }
    let m = a.shifted(c64::new(k, 0.0), -c)?;
    let lu = m.sp_lu().map_err(|e| Error::Singular(format!("sparse LU at pole {c}: {e:?}")))?;
    Ok(SparseFactorization::Complex { lu, n: a.dim() })
}

/// Factorizes the real matrix `scale·A + shift·I`.
pub fn factorize_full_real(a: &SparseOperator, scale: f64, shift: f64) -> Result<SparseFactorization> {
    let m = a.shifted(scale, shift)?;
    let lu = m
        .sp_lu()
        .map_err(|e| Error::Singular(format!("sparse LU of {scale}·A + {shift}·I: {e:?}")))?;
    Ok(SparseFactorization::Real { lu, n: a.dim() })
}

impl SparseFactorization {
    pub fn dim(&self) -> usize {
        match self {
            SparseFactorization::Complex { n, .. } | SparseFactorization::Real { n, .. } => *n,
        }
    }

    /// In-place complex solve.
    pub fn solve_complex(&self, rhs: &mut [Complex64]) -> Result<()> {
        Error::check_len(self.dim(), rhs.len())?;
        match self {
            SparseFactorization::Complex { lu, n } => {
                lu.solve_in_place(MatMut::from_column_major_slice_mut(rhs, *n, 1));
            }
            SparseFactorization::Real { lu, n } => {
                let mut re: Vec<f64> = rhs.iter().map(|z| z.re).collect();
                let mut im: Vec<f64> = rhs.iter().map(|z| z.im).collect();
                lu.solve_in_place(MatMut::from_column_major_slice_mut(&mut re, *n, 1));
                lu.solve_in_place(MatMut::from_column_major_slice_mut(&mut im, *n, 1));
                for (z, (r, i)) in rhs.iter_mut().zip(re.into_iter().zip(im)) {
                    *z = Complex64::new(r, i);
                }
            }
        }
        Ok(())
    }

    /// In-place real solve; only valid for real factorizations.
    pub fn solve_real(&self, rhs: &mut [f64]) -> Result<()> {
        Error::check_len(self.dim(), rhs.len())?;
        match self {
            SparseFactorization::Real { lu, n } => {
                lu.solve_in_place(MatMut::from_column_major_slice_mut(rhs, *n, 1));
                Ok(())
            }
            SparseFactorization::Complex { .. } => {
                Err(Error::Domain("real solve requested from a complex factorization".into()))
            }
        }
    }
}

/// Returns the solution of the factorized system for a complex right-hand side.
pub fn solve_full(f: &SparseFactorization, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut x = rhs.to_vec();
    f.solve_complex(&mut x)?;
    Ok(x)
}

/// Cache of full-operator factorizations keyed by pole.
#[derive(Debug, Clone, Default)]
pub struct FullResolvents {
    factors: Vec<(Complex64, SparseFactorization)>,
}

impl FullResolvents {
    pub fn build(a: &SparseOperator, k: f64, poles: &[Complex64]) -> Result<Self> {
        let factors = poles
            .iter()
            .map(|&c| Ok((c, factorize_full(a, k, c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { factors })
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn poles(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.factors.iter().map(|(c, _)| *c)
    }
}

impl super::FullResolvent for FullResolvents {
    fn solve_full(&self, pole: Complex64, rhs: &mut [Complex64]) -> Result<()> {
        let (_, f) = self
            .factors
            .iter()
            .find(|(c, _)| *c == pole)
            .ok_or_else(|| Error::Singular(format!("no factorization for pole {pole}")))?;
        f.solve_complex(rhs)
    }
}
