//! Dimensionally split ETDRK4 with Padé(2,2) resolvents: every solve is 1-D
//! along x or y.

use num_complex::Complex64;

use crate::error::Result;
use crate::linsolve::SplitResolvent;
use crate::problems::Reaction;
use crate::spatial::Axis::{X, Y};

use super::constants::PadeConstants;
use super::kernel::{add_2re, base_plus_2re, combine, join2, join3, two_re, Workspace};

/// One 22-stage split step `U(t) → U(t + k)`.
///
/// Independent solves (stages 5/6, 10/11, 13/14, 16/17/18, 20/21) run
/// concurrently when `parallel`; results are bit-identical either way.
#[allow(clippy::too_many_arguments)]
pub fn etdrk4p22if_step<S, R>(
    solver: &S,
    reaction: &R,
    k: f64,
    t: f64,
    u: &[f64],
    out: &mut [f64],
    ws: &mut Workspace,
    parallel: bool,
) -> Result<()>
where
    S: SplitResolvent + ?Sized,
    R: Reaction + ?Sized,
{
    let pc = PadeConstants::new();
    let (c1, c2) = (pc.c1, pc.c2);
    let w11x2 = 2.0 * pc.w11;
    let g24 = 24.0 * k * pc.w51;
    let th = t + 0.5 * k;
    ws.ensure(u.len());
    let Workspace { re, cx } = ws;
    let [fu, a, fa, b, fb, c, fc, g, s1, s2, s3, _] = re;
    let [z1, z2, z3] = cx;

    reaction.eval(u, t, fu);

    // a: y-solve with forcing, then x-solve
    combine(z1, &[(w11x2, u), (g24, fu)]);
    solver.solve_axis(c2, Y, z1)?;
    base_plus_2re(a, u, z1);
    combine(z1, &[(w11x2, a)]);
    solver.solve_axis(c2, X, z1)?;
    add_2re(a, z1);
    reaction.eval(a, th, fa);

    // b
    combine(z1, &[(w11x2, u)]);
    combine(z2, &[(g24, fa)]);
    join2(parallel, || solver.solve_axis(c2, Y, z1), || solver.solve_axis(c2, Y, z2))?;
    base_plus_2re(b, u, z1);
    combine(z1, &[(w11x2, b)]);
    solver.solve_axis(c2, X, z1)?;
    add_2re(b, z1);
    add_2re(b, z2);
    reaction.eval(b, th, fb);

    // c
    combine(z1, &[(w11x2, a), (2.0 * g24, fb)]);
    combine(z2, &[(g24, fu)]);
    join2(parallel, || solver.solve_axis(c2, Y, z1), || solver.solve_axis(c2, Y, z2))?;
    base_plus_2re(s1, a, z1);
    two_re(s2, z2);
    combine(z1, &[(w11x2, s1)]);
    combine(z2, &[(pc.w11, s2)]);
    join2(parallel, || solver.solve_axis(c2, X, z1), || solver.solve_axis(c1, X, z2))?;
    for q in 0..c.len() {
        c[q] = s1[q] + 2.0 * z1[q].re - (s2[q] + 2.0 * z2[q].re);
    }
    reaction.eval(c, t + k, fc);

    // final combination
    for q in 0..g.len() {
        g[q] = fa[q] + fb[q];
    }
    let k = Complex64::new(k, 0.0);
    combine(z1, &[(pc.w11, u), (k * pc.w21, fu)]);
    combine(z2, &[(4.0 * k * pc.w31, g)]);
    combine(z3, &[(k * pc.w41, fc)]);
    join3(
        parallel,
        || solver.solve_axis(c1, Y, z1),
        || solver.solve_axis(c1, Y, z2),
        || solver.solve_axis(c1, Y, z3),
    )?;
    base_plus_2re(s1, u, z1);
    two_re(s2, z2);
    two_re(s3, z3);
    combine(z1, &[(pc.w11, s1)]);
    combine(z2, &[(w11x2, s2)]);
    join2(parallel, || solver.solve_axis(c1, X, z1), || solver.solve_axis(c2, X, z2))?;
    for q in 0..out.len() {
        out[q] = s1[q] + s2[q] + s3[q] + 2.0 * z1[q].re + 2.0 * z2[q].re;
    }
    Ok(())
}
