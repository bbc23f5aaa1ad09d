//! L-stable Padé(0,3) ETD Runge–Kutta step on the full operator, used to damp
//! non-smooth initial data before switching to a fourth-order scheme.

use num_complex::Complex64;

use crate::error::Result;
use crate::linsolve::FullResolvent;
use crate::problems::Reaction;

use super::constants::SmootherConstants;
use super::kernel::{add_2re, combine, Workspace};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Solves the real-pole and complex-pole halves of one stage and writes
/// `out = Re z_real + 2 Re z_complex`.
fn stage<S: FullResolvent + ?Sized>(
    solver: &S,
    poles: (f64, Complex64),
    terms_real: &[(Complex64, &[f64])],
    terms_cx: &[(Complex64, &[f64])],
    z1: &mut [Complex64],
    z2: &mut [Complex64],
    out: &mut [f64],
) -> Result<()> {
    combine(z1, terms_real);
    solver.solve_full(real(poles.0), z1)?;
    combine(z2, terms_cx);
    solver.solve_full(poles.1, z2)?;
    for (o, z) in out.iter_mut().zip(z1.iter()) {
        *o = z.re;
    }
    add_2re(out, z2);
    Ok(())
}

/// One 12-stage smoothing step `U(t) → U(t + k)`.
pub fn smoother_step<S, R>(
    solver: &S,
    reaction: &R,
    k: f64,
    t: f64,
    u: &[f64],
    out: &mut [f64],
    ws: &mut Workspace,
) -> Result<()>
where
    S: FullResolvent + ?Sized,
    R: Reaction + ?Sized,
{
    let sc = SmootherConstants::new();
    let half = (sc.f1, sc.f2);
    let full = (sc.e1, sc.e2);
    let (s11x2, s12x2) = (real(2.0 * sc.s11), 2.0 * sc.s12);
    let (g1, g2) = (real(k * sc.s51), k * sc.s52);
    let th = t + 0.5 * k;
    ws.ensure(u.len());
    let Workspace { re, cx } = ws;
    let [fu, a, fa, b, fb, c, fc, g, _, _, _, _] = re;
    let [z1, z2, _] = cx;

    reaction.eval(u, t, fu);
    stage(solver, half, &[(s11x2, u), (g1, fu)], &[(s12x2, u), (g2, fu)], z1, z2, a)?;
    reaction.eval(a, th, fa);

    stage(solver, half, &[(s11x2, u), (g1, fa)], &[(s12x2, u), (g2, fa)], z1, z2, b)?;
    reaction.eval(b, th, fb);

    for q in 0..g.len() {
        g[q] = 2.0 * fb[q] - fu[q];
    }
    stage(solver, half, &[(s11x2, a), (g1, g)], &[(s12x2, a), (g2, g)], z1, z2, c)?;
    reaction.eval(c, t + k, fc);

    for q in 0..g.len() {
        g[q] = fa[q] + fb[q];
    }
    let kk = 2.0 * k;
    stage(
        solver,
        full,
        &[(real(sc.s11), u), (real(k * sc.s21), fu), (real(kk * sc.s31), g), (real(k * sc.s41), fc)],
        &[(sc.s12, u), (k * sc.s22, fu), (kk * sc.s32, g), (k * sc.s42, fc)],
        z1,
        z2,
        out,
    )
}
