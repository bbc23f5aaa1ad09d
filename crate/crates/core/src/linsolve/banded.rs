use num_complex::Complex64;

use crate::error::{Error, Result};

/// LU factorization with partial pivoting of a complex band matrix.
///
/// Storage follows the LAPACK `gbtrf` layout: column `j` holds rows
/// `j − ku − kl ..= j + kl`, with `kl` extra superdiagonals reserved for
/// fill-in from row interchanges.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexBandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<Complex64>,
    ipiv: Vec<usize>,
}

fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

impl ComplexBandedLu {
    /// Factorizes the `n × n` matrix whose entry `(i, j)` is `entry(i, j)` for
    /// `|i − j|` within the given bandwidths (entries outside are zero).
    pub fn factorize(
        n: usize,
        kl: usize,
        ku: usize,
        entry: impl Fn(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let kv = kl + ku;
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![Complex64::new(0.0, 0.0); ldab * n];
        for j in 0..n {
            let lo = j.saturating_sub(ku);
            let hi = (j + kl).min(n.saturating_sub(1));
            for i in lo..=hi {
                ab[j * ldab + kv + i - j] = entry(i, j);
            }
        }
        let mut ipiv = vec![0; n];
        let idx = |i: usize, j: usize| j * ldab + kv + i - j;

        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0;
            let mut best = cabs1(ab[idx(j, j)]);
            for r in 1..=km {
                let v = cabs1(ab[idx(j + r, j)]);
                if v > best {
                    best = v;
                    jp = r;
                }
            }
            ipiv[j] = j + jp;
            if !(best > 0.0 && best.is_finite()) {
                return Err(Error::Singular(format!("zero or non-finite pivot in column {j}")));
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    ab.swap(idx(j, c), idx(j + jp, c));
                }
            }
            if km > 0 {
                let pivot = ab[idx(j, j)];
                for r in 1..=km {
                    let q = idx(j + r, j);
                    ab[q] /= pivot;
                }
                for c in j + 1..=ju {
                    let u = ab[idx(j, c)];
                    if u == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for r in 1..=km {
                        let l = ab[idx(j + r, j)];
                        ab[idx(j + r, c)] -= l * u;
                    }
                }
            }
        }
        Ok(Self { n, kl, ku, ab, ipiv })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn ldab(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.ab[j * self.ldab() + self.kl + self.ku + i - j]
    }

    /// Solves `M x = b` for one right-hand side stored with `stride`.
    pub fn solve_strided(&self, b: &mut [Complex64], stride: usize) {
        let n = self.n;
        let kv = self.kl + self.ku;
        for j in 0..n {
            let pj = self.ipiv[j];
            if pj != j {
                b.swap(j * stride, pj * stride);
            }
            let km = self.kl.min(n - 1 - j);
            let bj = b[j * stride];
            for r in 1..=km {
                b[(j + r) * stride] -= self.at(j + r, j) * bj;
            }
        }
        for j in (0..n).rev() {
            b[j * stride] /= self.at(j, j);
            let bj = b[j * stride];
            for i in j.saturating_sub(kv)..j {
                b[i * stride] -= self.at(i, j) * bj;
            }
        }
    }

    /// Solves `M x = b` for a contiguous right-hand side.
    pub fn solve(&self, b: &mut [Complex64]) -> Result<()> {
        Error::check_len(self.n, b.len())?;
        self.solve_strided(b, 1);
        Ok(())
    }

    /// Solves `M X = B` where `B` has `n` rows of `width` contiguous entries,
    /// i.e. row `j` of every right-hand side is `b[j·width .. (j+1)·width]`.
    ///
    /// Each column sees exactly the arithmetic of [`Self::solve_strided`].
    pub fn solve_rows(&self, b: &mut [Complex64], width: usize) {
        let n = self.n;
        let kv = self.kl + self.ku;
        for j in 0..n {
            let pj = self.ipiv[j];
            if pj != j {
                let (lo, hi) = b.split_at_mut(pj * width);
                lo[j * width..(j + 1) * width].swap_with_slice(&mut hi[..width]);
            }
            let km = self.kl.min(n - 1 - j);
            let (head, tail) = b.split_at_mut((j + 1) * width);
            let bj = &head[j * width..];
            for r in 1..=km {
                let l = self.at(j + r, j);
                let row = &mut tail[(r - 1) * width..r * width];
                for (x, &y) in row.iter_mut().zip(bj) {
                    *x -= l * y;
                }
            }
        }
        for j in (0..n).rev() {
            let d = self.at(j, j);
            let (head, tail) = b.split_at_mut(j * width);
            let bj = &mut tail[..width];
            for x in bj.iter_mut() {
                *x /= d;
            }
            for i in j.saturating_sub(kv)..j {
                let u = self.at(i, j);
                let row = &mut head[i * width..(i + 1) * width];
                for (x, &y) in row.iter_mut().zip(bj.iter()) {
                    *x -= u * y;
                }
            }
        }
    }
}
