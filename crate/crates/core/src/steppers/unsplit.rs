//! Unsplit ETDRK4 with Padé(2,2) resolvents of the full 2-D operator.

use num_complex::Complex64;

use crate::error::Result;
use crate::linsolve::FullResolvent;
use crate::problems::Reaction;

use super::constants::PadeConstants;
use super::kernel::{base_plus_2re, combine, Workspace};

/// One 8-stage unsplit step `U(t) → U(t + k)`.
pub fn etdrk4p22_step<S, R>(
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
    let pc = PadeConstants::new();
    let w11x2 = 2.0 * pc.w11;
    let g24 = 24.0 * k * pc.w51;
    let th = t + 0.5 * k;
    ws.ensure(u.len());
    let Workspace { re, cx } = ws;
    let [fu, a, fa, b, fb, c, fc, g, _, _, _, _] = re;
    let [z, _, _] = cx;

    reaction.eval(u, t, fu);
    combine(z, &[(w11x2, u), (g24, fu)]);
    solver.solve_full(pc.c2, z)?;
    base_plus_2re(a, u, z);
    reaction.eval(a, th, fa);

    combine(z, &[(w11x2, u), (g24, fa)]);
    solver.solve_full(pc.c2, z)?;
    base_plus_2re(b, u, z);
    reaction.eval(b, th, fb);

    for q in 0..g.len() {
        g[q] = 2.0 * fb[q] - fu[q];
    }
    combine(z, &[(w11x2, a), (g24, g)]);
    solver.solve_full(pc.c2, z)?;
    base_plus_2re(c, a, z);
    reaction.eval(c, t + k, fc);

    for q in 0..g.len() {
        g[q] = fa[q] + fb[q];
    }
    let k = Complex64::new(k, 0.0);
    combine(z, &[(pc.w11, u), (k * pc.w21, fu), (4.0 * k * pc.w31, g), (k * pc.w41, fc)]);
    solver.solve_full(pc.c1, z)?;
    base_plus_2re(out, u, z);
    Ok(())
}
