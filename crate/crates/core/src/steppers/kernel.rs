//! Vector helpers shared by the step kernels.

use num_complex::Complex64;

use crate::error::Result;

/// `z ← Σ coef·v`.
pub(crate) fn combine(z: &mut [Complex64], terms: &[(Complex64, &[f64])]) {
    match terms {
        [(a, x)] => {
            for (z, &x) in z.iter_mut().zip(*x) {
                *z = a * x;
            }
        }
        _ => {
            z.fill(Complex64::new(0.0, 0.0));
            for (a, x) in terms {
                for (z, &x) in z.iter_mut().zip(*x) {
                    *z += a * x;
                }
            }
        }
    }
}

/// `out ← base + 2·Re z`.
pub(crate) fn base_plus_2re(out: &mut [f64], base: &[f64], z: &[Complex64]) {
    for ((o, &b), z) in out.iter_mut().zip(base).zip(z) {
        *o = b + 2.0 * z.re;
    }
}

/// `out ← out + 2·Re z`.
pub(crate) fn add_2re(out: &mut [f64], z: &[Complex64]) {
    for (o, z) in out.iter_mut().zip(z) {
        *o += 2.0 * z.re;
    }
}

/// `out ← 2·Re z`.
pub(crate) fn two_re(out: &mut [f64], z: &[Complex64]) {
    for (o, z) in out.iter_mut().zip(z) {
        *o = 2.0 * z.re;
    }
}

/// Runs two independent closures, concurrently when `parallel`.
pub(crate) fn join2<A, B>(parallel: bool, a: A, b: B) -> Result<()>
where
    A: FnOnce() -> Result<()> + Send,
    B: FnOnce() -> Result<()> + Send,
{
    if parallel {
        let (ra, rb) = rayon::join(a, b);
        ra.and(rb)
    } else {
        a()?;
        b()
    }
}

pub(crate) fn join3<A, B, C>(parallel: bool, a: A, b: B, c: C) -> Result<()>
where
    A: FnOnce() -> Result<()> + Send,
    B: FnOnce() -> Result<()> + Send,
    C: FnOnce() -> Result<()> + Send,
{
    if parallel {
        let (ra, (rb, rc)) = rayon::join(a, || rayon::join(b, c));
        ra.and(rb).and(rc)
    } else {
        a()?;
        b()?;
        c()
    }
}

/// Scratch vectors reused across steps.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    pub(crate) re: [Vec<f64>; 12],
    pub(crate) cx: [Vec<Complex64>; 3],
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        let mut ws = Self::default();
        ws.ensure(n);
        ws
    }

    pub(crate) fn ensure(&mut self, n: usize) {
        for v in self.re.iter_mut() {
            v.resize(n, 0.0);
        }
        for v in self.cx.iter_mut() {
            v.resize(n, Complex64::new(0.0, 0.0));
        }
    }
}
