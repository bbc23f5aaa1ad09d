use etdsplit::linsolve::{AxisResolvents, DenseResolvent, FullResolvents};
use etdsplit::problems::{make_problem, Reaction, ZeroReaction};
use etdsplit::spatial::{assemble_full, assemble_split, Axis, BoundaryKind, Grid2D, SplitOperators};
use etdsplit::steppers::{
    etdrk4p22_step, etdrk4p22if_step, integrate, scheme_poles, smoother_step, ExactEtdrk4, PadeConstants,
    PlanOptions, SbdfFactors, Scheme, SmootherConstants, StepPlan, Workspace,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

fn nonlinear(u: &[f64], t: f64, out: &mut [f64]) {
    for (o, &v) in out.iter_mut().zip(u) {
        *o = -v / (1.0 + v * v) + 0.3 * (t + v).sin();
    }
}

fn block_diag(ops: &SplitOperators, axis: Option<Axis>) -> DMatrix<f64> {
    let nb = ops.block_len();
    let n = ops.field_len();
    let mut m = DMatrix::zeros(n, n);
    for s in 0..ops.species() {
        let blk = match axis {
            Some(a) => DMatrix::from_row_slice(nb, nb, &ops.dense_axis(a, s)),
            None => {
                DMatrix::from_row_slice(nb, nb, &ops.dense_axis(Axis::X, s))
                    + DMatrix::from_row_slice(nb, nb, &ops.dense_axis(Axis::Y, s))
            }
        };
        m.view_mut((s * nb, s * nb), (nb, nb)).copy_from(&blk);
    }
    m
}

/// `num(M)·den(M)⁻¹` for quadratic polynomials given by coefficients `[c0, c1, c2]`.
fn rational(m: &DMatrix<f64>, num: [f64; 3], den: [f64; 3]) -> DMatrix<f64> {
    let n = m.nrows();
    let i = DMatrix::<f64>::identity(n, n);
    let m2 = m * m;
    let p = &i * num[0] + m * num[1] + &m2 * num[2];
    let q = &i * den[0] + m * den[1] + &m2 * den[2];
    q.lu().solve(&p).expect("invertible").transpose().transpose()
}

struct Pade {
    r: DMatrix<f64>,
    rh: DMatrix<f64>,
    p1: DMatrix<f64>,
    p2: DMatrix<f64>,
    p3: DMatrix<f64>,
    ph: DMatrix<f64>,
}

fn pade_of(a: &DMatrix<f64>, k: f64) -> Pade {
    let m = a * k;
    let den = [12.0, 6.0, 1.0];
    Pade {
        r: rational(&m, [12.0, -6.0, 1.0], den),
        rh: rational(&m, [48.0, -12.0, 1.0], [48.0, 12.0, 1.0]),
        p1: rational(&m, [2.0, -1.0, 0.0], den) * k,
        p2: rational(&m, [2.0, 0.0, 0.0], den) * k,
        p3: rational(&m, [2.0, 1.0, 0.0], den) * k,
        ph: rational(&m, [24.0, 0.0, 0.0], [48.0, 12.0, 1.0]) * k,
    }
}

fn feval<R: Reaction + ?Sized>(r: &R, v: &DVector<f64>, t: f64) -> DVector<f64> {
    let mut out = vec![0.0; v.len()];
    r.eval(v.as_slice(), t, &mut out);
    DVector::from_vec(out)
}

/// Closed form of the split step built from dense rational matrix functions.
fn split_oracle<R: Reaction + ?Sized>(ops: &SplitOperators, r: &R, k: f64, t: f64, u: &[f64]) -> Vec<f64> {
    let x = pade_of(&block_diag(ops, Some(Axis::X)), k);
    let y = pade_of(&block_diag(ops, Some(Axis::Y)), k);
    let u = DVector::from_column_slice(u);
    let th = t + k / 2.0;
    let fu = feval(r, &u, t);
    let a = &x.rh * (&y.rh * &u + &y.ph * &fu);
    let fa = feval(r, &a, th);
    let b = &x.rh * (&y.rh * &u) + &y.ph * &fa;
    let fb = feval(r, &b, th);
    let c = &x.rh * (&y.rh * &a + &y.ph * (&fb * 2.0)) - &x.r * (&y.ph * &fu);
    let fc = feval(r, &c, t + k);
    let g = &fa + &fb;
    let out = &x.r * (&y.r * &u + &y.p1 * &fu) + &x.rh * (&y.p2 * (&g * 2.0)) + &y.p3 * &fc;
    out.as_slice().to_vec()
}

fn unsplit_oracle<R: Reaction + ?Sized>(ops: &SplitOperators, r: &R, k: f64, t: f64, u: &[f64]) -> Vec<f64> {
    let f = pade_of(&block_diag(ops, None), k);
    let u = DVector::from_column_slice(u);
    let th = t + k / 2.0;
    let fu = feval(r, &u, t);
    let a = &f.rh * &u + &f.ph * &fu;
    let fa = feval(r, &a, th);
    let b = &f.rh * &u + &f.ph * &fa;
    let fb = feval(r, &b, th);
    let c = &f.rh * &a + &f.ph * (&fb * 2.0 - &fu);
    let fc = feval(r, &c, t + k);
    let out = &f.r * &u + &f.p1 * &fu + &f.p2 * ((&fa + &fb) * 2.0) + &f.p3 * &fc;
    out.as_slice().to_vec()
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn smooth_field(n: usize) -> Vec<f64> {
    (0..n).map(|q| 0.5 + 0.4 * ((q as f64) * 0.37).sin()).collect()
}

fn split_plan(ops: &SplitOperators, k: f64, parallel: bool) -> AxisResolvents {
    let pairs: Vec<_> = scheme_poles(Scheme::Etdrk4p22If, false)
        .into_iter()
        .map(|p| (p.pole, p.axis.unwrap()))
        .collect();
    AxisResolvents::build(ops, k, &pairs, parallel).unwrap()
}

#[test]
fn split_step_matches_dense_solves_and_closed_form() {
    for bc in [BoundaryKind::Dirichlet, BoundaryKind::Neumann] {
        for m in 3..=6 {
            let g = Grid2D::new(0.0, 1.0, m, bc).unwrap();
            let ops = assemble_split(&g, &[0.7]).unwrap();
            let k = 0.05;
            let u = smooth_field(ops.field_len());
            let mut ws = Workspace::default();
            let mut banded = vec![0.0; u.len()];
            etdrk4p22if_step(&split_plan(&ops, k, false), &nonlinear, k, 0.2, &u, &mut banded, &mut ws, false).unwrap();
            let mut dense = vec![0.0; u.len()];
            let dr = DenseResolvent::new(&ops, k).unwrap();
            etdrk4p22if_step(&dr, &nonlinear, k, 0.2, &u, &mut dense, &mut ws, false).unwrap();
            assert!(rel_diff(&banded, &dense) < 1e-10, "{bc} m={m}: {}", rel_diff(&banded, &dense));
            let oracle = split_oracle(&ops, &nonlinear, k, 0.2, &u);
            assert!(rel_diff(&banded, &oracle) < 1e-10, "{bc} m={m}: {}", rel_diff(&banded, &oracle));
        }
    }
}

#[test]
fn split_step_two_species() {
    let p = make_problem("brusselator").unwrap();
    let g = Grid2D::new(0.0, 1.0, 4, BoundaryKind::Neumann).unwrap();
    let ops = assemble_split(&g, &[0.3, 0.05]).unwrap();
    let u0 = p.eval_initial(&g);
    let k = 0.02;
    let mut out = vec![0.0; u0.len()];
    etdrk4p22if_step(&split_plan(&ops, k, false), &p, k, 0.0, u0.as_slice(), &mut out, &mut Workspace::default(), false)
        .unwrap();
    let oracle = split_oracle(&ops, &p, k, 0.0, u0.as_slice());
    assert!(rel_diff(&out, &oracle) < 1e-10);
}

#[test]
fn parallel_split_step_is_bit_identical() {
    let g = Grid2D::new(0.0, 1.0, 30, BoundaryKind::Dirichlet).unwrap();
    let ops = assemble_split(&g, &[1.0]).unwrap();
    let k = 0.01;
    let u = smooth_field(ops.field_len());
    let mut seq = vec![0.0; u.len()];
    let mut par = vec![0.0; u.len()];
    let mut ws = Workspace::default();
    etdrk4p22if_step(&split_plan(&ops, k, false), &nonlinear, k, 0.0, &u, &mut seq, &mut ws, false).unwrap();
    etdrk4p22if_step(&split_plan(&ops, k, true), &nonlinear, k, 0.0, &u, &mut par, &mut ws, true).unwrap();
    assert_eq!(seq, par);
}

#[test]
fn unsplit_step_matches_closed_form() {
    let pc = PadeConstants::new();
    for bc in [BoundaryKind::Dirichlet, BoundaryKind::Neumann] {
        for m in [3, 5] {
            let g = Grid2D::new(-1.0, 1.0, m, bc).unwrap();
            let ops = assemble_split(&g, &[1.3]).unwrap();
            let a = assemble_full(&g, &[1.3]).unwrap();
            let k = 0.04;
            let u = smooth_field(ops.field_len());
            let mut out = vec![0.0; u.len()];
            let fr = FullResolvents::build(&a, k, &[pc.c2, pc.c1]).unwrap();
            etdrk4p22_step(&fr, &nonlinear, k, 0.1, &u, &mut out, &mut Workspace::default()).unwrap();
            let oracle = unsplit_oracle(&ops, &nonlinear, k, 0.1, &u);
            assert!(rel_diff(&out, &oracle) < 1e-10, "{bc} m={m}");
            let mut dense = vec![0.0; u.len()];
            etdrk4p22_step(&DenseResolvent::new(&ops, k).unwrap(), &nonlinear, k, 0.1, &u, &mut dense, &mut Workspace::default())
                .unwrap();
            assert!(rel_diff(&out, &dense) < 1e-10);
        }
    }
}

#[test]
fn smoother_linear_map_is_pade03() {
    let g = Grid2D::new(0.0, 1.0, 5, BoundaryKind::Dirichlet).unwrap();
    let ops = assemble_split(&g, &[1.0]).unwrap();
    let k = 0.1;
    let u = smooth_field(ops.field_len());
    let mut out = vec![0.0; u.len()];
    smoother_step(&DenseResolvent::new(&ops, k).unwrap(), &ZeroReaction, k, 0.0, &u, &mut out, &mut Workspace::default())
        .unwrap();
    let m = block_diag(&ops, None) * k;
    let n = m.nrows();
    let i = DMatrix::<f64>::identity(n, n);
    let m2 = &m * &m;
    let den = &i + &m + &m2 * 0.5 + &m2 * &m * (1.0 / 6.0);
    let expected = den.lu().solve(&DVector::from_column_slice(&u)).unwrap();
    assert!(rel_diff(&out, expected.as_slice()) < 1e-12);
}

#[test]
fn smoother_is_third_order_locally() {
    // local error against exact ETDRK4 shrinks at least like k⁴
    let g = Grid2D::new(0.0, 1.0, 4, BoundaryKind::Neumann).unwrap();
    let ops = assemble_split(&g, &[0.2]).unwrap();
    let a = block_diag(&ops, None);
    let u = smooth_field(ops.field_len());
    let err = |k: f64| {
        let exact = ExactEtdrk4::new(a.transpose().as_slice(), u.len(), k).unwrap().step(&nonlinear, 0.0, &u);
        let mut out = vec![0.0; u.len()];
        smoother_step(&DenseResolvent::new(&ops, k).unwrap(), &nonlinear, k, 0.0, &u, &mut out, &mut Workspace::default())
            .unwrap();
        rel_diff(&out, &exact)
    };
    let ratio = err(0.004) / err(0.002);
    assert!(ratio > 14.0, "ratio {ratio}");
}

#[test]
fn pade_step_local_order_against_exact_etdrk4() {
    let g = Grid2D::new(0.0, 1.0, 4, BoundaryKind::Dirichlet).unwrap();
    let ops = assemble_split(&g, &[0.05]).unwrap();
    let a = block_diag(&ops, None);
    let u = smooth_field(ops.field_len());
    let err = |k: f64| {
        let exact = ExactEtdrk4::new(a.transpose().as_slice(), u.len(), k).unwrap().step(&nonlinear, 0.0, &u);
        let mut out = vec![0.0; u.len()];
        etdrk4p22_step(&DenseResolvent::new(&ops, k).unwrap(), &nonlinear, k, 0.0, &u, &mut out, &mut Workspace::default())
            .unwrap();
        rel_diff(&out, &exact)
    };
    let ratio = err(0.01) / err(0.005);
    assert!((ratio - 32.0).abs() < 3.2, "ratio {ratio}");
}

#[test]
fn neumann_constants_preserved_by_all_schemes() {
    let g = Grid2D::new(0.0, 1.0, 9, BoundaryKind::Neumann).unwrap();
    let u0 = etdsplit::Field::from_fn(1, g.p1d(), |_, _, _| 0.75);
    for scheme in Scheme::ALL {
        let ops = assemble_split(&g, &[1.0]).unwrap();
        let plan = StepPlan::build(scheme, ops, 0.1, PlanOptions::default()).unwrap();
        let res = integrate(&plan, &ZeroReaction, &u0, 0.5, None).unwrap();
        for v in res.field.as_slice() {
            assert!((v - 0.75).abs() < 1e-12, "{scheme}: {v}");
        }
    }
}

#[test]
fn plan_rejects_bad_input() {
    let g = Grid2D::new(0.0, 1.0, 5, BoundaryKind::Dirichlet).unwrap();
    let ops = || assemble_split(&g, &[1.0]).unwrap();
    assert!(StepPlan::build(Scheme::Etdrk4p22If, ops(), 0.0, PlanOptions::default()).is_err());
    let smooth = PlanOptions { smoothing_steps: 2, parallel: false };
    assert!(StepPlan::build(Scheme::Sbdf4, ops(), 0.1, smooth).is_err());
    let plan = StepPlan::build(Scheme::Etdrk4p22If, ops(), 0.3, PlanOptions::default()).unwrap();
    let u0 = etdsplit::Field::zeros(1, g.p1d());
    assert!(integrate(&plan, &ZeroReaction, &u0, 1.0, None).is_err());
    let bad = etdsplit::Field::zeros(1, g.p1d() + 1);
    assert!(integrate(&plan, &ZeroReaction, &bad, 0.3, None).is_err());
}

#[test]
fn plan_factorization_counts() {
    let g = Grid2D::new(0.0, 1.0, 5, BoundaryKind::Neumann).unwrap();
    let ops = || assemble_split(&g, &[1.0, 2.0]).unwrap();
    let count = |s, steps| {
        StepPlan::build(s, ops(), 0.1, PlanOptions { smoothing_steps: steps, parallel: false })
            .unwrap()
            .factorization_count()
    };
    assert_eq!(count(Scheme::Etdrk4p22If, 0), 8);
    assert_eq!(count(Scheme::Etdrk4p22If, 3), 12);
    assert_eq!(count(Scheme::Etdrk4p22, 0), 2);
    assert_eq!(count(Scheme::SmootherOnly, 0), 4);
    assert_eq!(count(Scheme::Sbdf4, 0), 2);
}

#[test]
fn zero_final_time_returns_initial_and_snapshots() {
    let p = make_problem("enzyme").unwrap();
    let g = p.grid_with_cells(8).unwrap();
    let u0 = p.eval_initial(&g);
    let plan = StepPlan::build(Scheme::Etdrk4p22If, assemble_split(&g, &p.diffusion).unwrap(), 0.1, PlanOptions::default())
        .unwrap();
    let r = integrate(&plan, &p, &u0, 0.0, Some(1)).unwrap();
    assert_eq!(r.field, u0);
    assert_eq!(r.steps, 0);
    let r = integrate(&plan, &p, &u0, 0.5, Some(2)).unwrap();
    let times: Vec<f64> = r.snapshots.iter().map(|s| s.0).collect();
    assert_eq!(times.len(), 3);
    assert!((times[2] - 0.4).abs() < 1e-12);
}

#[test]
fn divergence_reported_as_non_finite() {
    let g = Grid2D::new(0.0, 1.0, 5, BoundaryKind::Dirichlet).unwrap();
    let plan = StepPlan::build(Scheme::Etdrk4p22If, assemble_split(&g, &[1.0]).unwrap(), 0.5, PlanOptions::default()).unwrap();
    let blowup = |u: &[f64], _: f64, out: &mut [f64]| {
        for (o, v) in out.iter_mut().zip(u) {
            *o = 1e200 * v * v;
        }
    };
    let u0 = etdsplit::Field::from_fn(1, g.p1d(), |_, _, _| 1.0);
    let err = integrate(&plan, &blowup, &u0, 1.0, None).unwrap_err();
    assert!(matches!(err, etdsplit::Error::NonFinite { .. }), "{err}");
}

#[test]
fn smoother_constants_drive_plan() {
    let sc = SmootherConstants::new();
    let poles = scheme_poles(Scheme::SmootherOnly, false);
    assert_eq!(poles.len(), 4);
    assert_eq!(poles[0].pole, Complex64::new(sc.f1, 0.0));
    assert!(poles.iter().all(|p| p.axis.is_none()));
}

#[test]
fn sbdf4_fourth_order_from_exact_history() {
    // u' = −u on a Neumann grid with a constant state reduces to a scalar ODE
    let g = Grid2D::new(0.0, 1.0, 3, BoundaryKind::Neumann).unwrap();
    let ops = assemble_split(&g, &[1.0]).unwrap();
    let a = assemble_full(&g, &[1.0]).unwrap();
    let n = a.dim();
    let err = |k: f64| {
        let sb = SbdfFactors::build(&ops, &a, k).unwrap();
        let exact = |t: f64| vec![(-t).exp(); n];
        let mut us: Vec<Vec<f64>> = (0..4).rev().map(|l| exact(l as f64 * k)).collect();
        let steps = (1.0 / k).round() as usize;
        for _ in 3..steps {
            let fs: Vec<Vec<f64>> = us.iter().map(|u| u.iter().map(|v| -v).collect()).collect();
            let mut next = vec![0.0; n];
            sb.sbdf4_step([&us[0], &us[1], &us[2], &us[3]], [&fs[0], &fs[1], &fs[2], &fs[3]], &mut next)
                .unwrap();
            us.pop();
            us.insert(0, next);
        }
        (us[0][0] - (-1.0f64).exp()).abs()
    };
    let p = (err(0.05) / err(0.025)).log2();
    assert!((p - 4.0).abs() < 0.2, "order {p}");
}

#[test]
fn sbdf4_startup_runs_and_decays() {
    let g = Grid2D::new(0.0, 1.0, 3, BoundaryKind::Neumann).unwrap();
    let u0 = etdsplit::Field::from_fn(1, g.p1d(), |_, _, _| 1.0);
    let decay = |u: &[f64], _: f64, out: &mut [f64]| {
        for (o, v) in out.iter_mut().zip(u) {
            *o = -v;
        }
    };
    let err = |k: f64| {
        let plan = StepPlan::build(Scheme::Sbdf4, assemble_split(&g, &[1.0]).unwrap(), k, PlanOptions::default()).unwrap();
        let r = integrate(&plan, &decay, &u0, 1.0, None).unwrap();
        (r.field.at(0, 1, 1) - (-1.0f64).exp()).abs()
    };
    let (e1, e2) = (err(0.2), err(0.1));
    assert!(e2 < e1 && e1 < 1e-3, "{e1} {e2}");
}
