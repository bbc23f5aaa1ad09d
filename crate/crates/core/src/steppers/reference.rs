//! Dense exact-exponential ETDRK4 step for small systems.
//!
//! The φ-functions come from one exponential of an augmented block matrix,
//! `exp([[L, I, 0, 0], [0, 0, I, 0], [0, 0, 0, I], [0, 0, 0, 0]])`, whose first
//! block row is `[e^L, φ₁(L), φ₂(L), φ₃(L)]`. No inverse of `A` is needed, so
//! singular operators (Neumann) are fine.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linsolve::DENSE_MAX_DIM;
use crate::problems::Reaction;

/// Returns `[e^L, φ₁(L), φ₂(L), φ₃(L)]`.
pub fn phi_functions(l: &DMatrix<f64>) -> [DMatrix<f64>; 4] {
    let n = l.nrows();
    let mut m = DMatrix::<f64>::zeros(4 * n, 4 * n);
    m.view_mut((0, 0), (n, n)).copy_from(l);
    for b in 0..3 {
        m.view_mut((b * n, (b + 1) * n), (n, n)).fill_with_identity();
    }
    let e = m.exp();
    std::array::from_fn(|b| e.view((0, b * n), (n, n)).into_owned())
}

/// Precomputed dense ETDRK4 propagators for `dU/dt + AU = F` with step `k`.
#[derive(Debug, Clone)]
pub struct ExactEtdrk4 {
    k: f64,
    full: DMatrix<f64>,
    half: DMatrix<f64>,
    /// `(k/2)·φ₁(−kA/2)`
    half_forcing: DMatrix<f64>,
    /// `k(φ₁ − 3φ₂ + 4φ₃)`, `k(φ₂ − 2φ₃)`, `k(4φ₃ − φ₂)` at `−kA`
    weights: [DMatrix<f64>; 3],
}

impl ExactEtdrk4 {
    /// `a` is the dense row-major `n × n` operator `A`.
    pub fn new(a: &[f64], n: usize, k: f64) -> Result<Self> {
        if n > DENSE_MAX_DIM {
            return Err(Error::TooLarge { n, max: DENSE_MAX_DIM });
        }
        Error::check_len(n * n, a.len())?;
        let a = DMatrix::from_row_slice(n, n, a);
        let [full, p1, p2, p3] = phi_functions(&(&a * -k));
        let [half, h1, _, _] = phi_functions(&(&a * (-0.5 * k)));
        Ok(Self {
            k,
            full,
            half,
            half_forcing: h1 * (0.5 * k),
            weights: [
                (&p1 - &p2 * 3.0 + &p3 * 4.0) * k,
                (&p2 - &p3 * 2.0) * k,
                (&p3 * 4.0 - &p2) * k,
            ],
        })
    }

    pub fn step<R: Reaction + ?Sized>(&self, reaction: &R, t: f64, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        let f = |v: &DVector<f64>, t: f64| {
            let mut out = vec![0.0; n];
            reaction.eval(v.as_slice(), t, &mut out);
            DVector::from_vec(out)
        };
        let th = t + 0.5 * self.k;
        let u = DVector::from_column_slice(u);
        let fu = f(&u, t);
        let a = &self.half * &u + &self.half_forcing * &fu;
        let fa = f(&a, th);
        let b = &self.half * &u + &self.half_forcing * &fa;
        let fb = f(&b, th);
        let c = &self.half * &a + &self.half_forcing * (&fb * 2.0 - &fu);
        let fc = f(&c, t + self.k);
        let [w1, w2, w3] = &self.weights;
        let out = &self.full * &u + w1 * &fu + w2 * ((&fa + &fb) * 2.0) + w3 * &fc;
        out.as_slice().to_vec()
    }
}

/// One exact ETDRK4 step; builds the propagators each call.
pub fn exact_etdrk4_reference_step<R: Reaction + ?Sized>(
    a: &[f64],
    u: &[f64],
    t: f64,
    k: f64,
    reaction: &R,
) -> Result<Vec<f64>> {
    Ok(ExactEtdrk4::new(a, u.len(), k)?.step(reaction, t, u))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_phi_values() {
        let z = -0.7f64;
        let [e, p1, p2, p3] = phi_functions(&DMatrix::from_element(1, 1, z));
        let ez = z.exp();
        let q1 = (ez - 1.0) / z;
        let q2 = (ez - 1.0 - z) / (z * z);
        let q3 = (ez - 1.0 - z - z * z / 2.0) / (z * z * z);
        assert!((e[0] - ez).abs() < 1e-14);
        assert!((p1[0] - q1).abs() < 1e-14);
        assert!((p2[0] - q2).abs() < 1e-14);
        assert!((p3[0] - q3).abs() < 1e-13);
    }

    #[test]
    fn zero_operator_limits() {
        let [e, p1, p2, p3] = phi_functions(&DMatrix::zeros(2, 2));
        assert_eq!(e, DMatrix::identity(2, 2));
        assert!((p1[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((p2[(1, 1)] - 0.5).abs() < 1e-15);
        assert!((p3[(0, 0)] - 1.0 / 6.0).abs() < 1e-15);
        assert!(p1[(0, 1)].abs() < 1e-15);
    }

    #[test]
    fn scalar_linear_problem_is_exact() {
        // u' = −2u + (−u) integrates exactly when the reaction is linear and folded
        let step = ExactEtdrk4::new(&[3.0], 1, 0.2).unwrap();
        let u = step.step(&crate::problems::ZeroReaction, 0.0, &[1.0]);
        assert!((u[0] - (-0.6f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn constant_forcing_steady_state() {
        // A u = F keeps u fixed
        let reaction = |_: &[f64], _: f64, out: &mut [f64]| out.fill(6.0);
        let u = exact_etdrk4_reference_step(&[3.0], &[2.0], 0.0, 0.5, &reaction).unwrap();
        assert!((u[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_large() {
        let a = vec![0.0; 65 * 65];
        assert!(matches!(ExactEtdrk4::new(&a, 65, 0.1), Err(Error::TooLarge { .. })));
    }
}
