//! Step plans (pre-factored resolvents for one scheme, grid and `k`) and the
//! time integration loop.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linsolve::{AxisResolvents, FullResolvents};
use crate::problems::Reaction;
use crate::spatial::{Axis, SparseOperator, SplitOperators};

use super::constants::{PadeConstants, SmootherConstants};
use super::kernel::Workspace;
use super::sbdf::SbdfFactors;
use super::{etdrk4p22_step, etdrk4p22if_step, smoother_step};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Dimensionally split ETDRK4 with Padé(2,2) resolvents.
    Etdrk4p22If,
    /// Unsplit ETDRK4 with Padé(2,2) resolvents.
    Etdrk4p22,
    /// Semi-implicit BDF4 with SBDF1 startup.
    Sbdf4,
    /// Every step taken with the Padé(0,3) smoother.
    SmootherOnly,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Etdrk4p22If, Scheme::Etdrk4p22, Scheme::Sbdf4, Scheme::SmootherOnly];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Etdrk4p22If => "etdrk4p22if",
            Scheme::Etdrk4p22 => "etdrk4p22",
            Scheme::Sbdf4 => "sbdf4",
            Scheme::SmootherOnly => "smoother-only",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace(['_', '-'], "");
        match norm.as_str() {
            "etdrk4p22if" => Ok(Scheme::Etdrk4p22If),
            "etdrk4p22" => Ok(Scheme::Etdrk4p22),
            "sbdf4" => Ok(Scheme::Sbdf4),
            "smootheronly" | "smoother" => Ok(Scheme::SmootherOnly),
            _ => Err(Error::UnknownScheme(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PlanOptions {
    /// Number of leading Padé(0,3) steps (ETD schemes only).
    pub smoothing_steps: usize,
    /// Run independent solves and line solves on the rayon pool.
    pub parallel: bool,
}

/// One factorization the plan holds: pole and, for split solves, the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlannedPole {
    pub pole: Complex64,
    pub axis: Option<Axis>,
}

/// Everything needed to advance one field with a fixed `k`.
#[derive(Debug)]
pub struct StepPlan {
    scheme: Scheme,
    k: f64,
    ops: SplitOperators,
    opts: PlanOptions,
    split: Option<AxisResolvents>,
    unsplit: Option<FullResolvents>,
    smoother: Option<FullResolvents>,
    sbdf: Option<SbdfFactors>,
}

/// Poles of each scheme, in the order the step first uses them.
pub fn scheme_poles(scheme: Scheme, smoothing: bool) -> Vec<PlannedPole> {
    let pc = PadeConstants::new();
    let sc = SmootherConstants::new();
    let mut out = Vec::new();
    match scheme {
        Scheme::Etdrk4p22If => {
            for (pole, axis) in [(pc.c2, Axis::Y), (pc.c2, Axis::X), (pc.c1, Axis::X), (pc.c1, Axis::Y)] {
                out.push(PlannedPole { pole, axis: Some(axis) });
            }
        }
        Scheme::Etdrk4p22 => {
            out.extend([pc.c2, pc.c1].map(|pole| PlannedPole { pole, axis: None }));
        }
        Scheme::Sbdf4 | Scheme::SmootherOnly => {}
    }
    if smoothing || scheme == Scheme::SmootherOnly {
        let smooth = [Complex64::new(sc.f1, 0.0), sc.f2, Complex64::new(sc.e1, 0.0), sc.e2];
        out.extend(smooth.map(|pole| PlannedPole { pole, axis: None }));
    }
    out
}

impl StepPlan {
    pub fn build(scheme: Scheme, ops: SplitOperators, k: f64, opts: PlanOptions) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Domain(format!("time step must be positive, got {k}")));
        }
        if scheme == Scheme::Sbdf4 && opts.smoothing_steps > 0 {
            return Err(Error::Config("smoothing steps apply to ETD schemes only".into()));
        }
        let smoothing = opts.smoothing_steps > 0;
        let poles = scheme_poles(scheme, smoothing);
        let needs_full = scheme != Scheme::Etdrk4p22If || smoothing;
        let full = needs_full.then(|| SparseOperator::from_split(&ops));
        let full_poles = |from_smoother: bool| -> Vec<Complex64> {
            let n_main = if scheme == Scheme::Etdrk4p22 { 2 } else { 0 };
            let it = poles.iter().filter(|p| p.axis.is_none()).map(|p| p.pole);
            if from_smoother {
                it.skip(n_main).collect()
            } else {
                it.take(n_main).collect()
            }
        };
        let split = match scheme {
            Scheme::Etdrk4p22If => {
                let pairs: Vec<_> = poles.iter().filter_map(|p| p.axis.map(|a| (p.pole, a))).collect();
                Some(AxisResolvents::build(&ops, k, &pairs, opts.parallel)?)
            }
            _ => None,
        };
        let unsplit = match (scheme, &full) {
            (Scheme::Etdrk4p22, Some(a)) => Some(FullResolvents::build(a, k, &full_poles(false))?),
            _ => None,
        };
        let smoother = match &full {
            Some(a) if smoothing || scheme == Scheme::SmootherOnly => Some(FullResolvents::build(a, k, &full_poles(true))?),
            _ => None,
        };
        let sbdf = match (scheme, &full) {
            (Scheme::Sbdf4, Some(a)) => Some(SbdfFactors::build(&ops, a, k)?),
            _ => None,
        };
        Ok(Self {
            scheme,
            k,
            ops,
            opts,
            split,
            unsplit,
            smoother,
            sbdf,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn operators(&self) -> &SplitOperators {
        &self.ops
    }

    pub fn options(&self) -> PlanOptions {
        self.opts
    }

    /// Number of factorizations held (split ones count once per species).
    pub fn factorization_count(&self) -> usize {
        self.split.as_ref().map_or(0, |s| s.len())
            + self.unsplit.as_ref().map_or(0, |s| s.len())
            + self.smoother.as_ref().map_or(0, |s| s.len())
            + if self.sbdf.is_some() { 2 } else { 0 }
    }

    /// One step of the main one-step scheme (`smoothing` selects the smoother).
    pub fn step<R: Reaction + ?Sized>(
        &self,
        reaction: &R,
        t: f64,
        u: &[f64],
        out: &mut [f64],
        ws: &mut Workspace,
        smoothing: bool,
    ) -> Result<()> {
        Error::check_len(self.ops.field_len(), u.len())?;
        Error::check_len(u.len(), out.len())?;
        let missing = || Error::Config(format!("{} plan has no factorizations for this step", self.scheme));
        if smoothing || self.scheme == Scheme::SmootherOnly {
            let s = self.smoother.as_ref().ok_or_else(missing)?;
            return smoother_step(s, reaction, self.k, t, u, out, ws);
        }
        match self.scheme {
            Scheme::Etdrk4p22If => {
                let s = self.split.as_ref().ok_or_else(missing)?;
                etdrk4p22if_step(s, reaction, self.k, t, u, out, ws, self.opts.parallel)
            }
            Scheme::Etdrk4p22 => {
                let s = self.unsplit.as_ref().ok_or_else(missing)?;
                etdrk4p22_step(s, reaction, self.k, t, u, out, ws)
            }
            _ => Err(Error::Config("SBDF4 is a multistep scheme; use integrate".into())),
        }
    }
}

/// Result of [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub field: Field,
    pub steps: usize,
    /// `(t, U(t))` every `snapshot_every` steps, including `t = 0`.
    pub snapshots: Vec<(f64, Field)>,
}

/// Number of whole steps of size `k` in `[0, T]`.
pub fn step_count(k: f64, final_time: f64) -> Result<usize> {
    if !(final_time >= 0.0 && final_time.is_finite()) {
        return Err(Error::Config(format!("final time must be nonnegative, got {final_time}")));
    }
    let n = (final_time / k).round();
    if (n * k - final_time).abs() > 1e-9 * final_time.max(1.0) {
        return Err(Error::Config(format!("final time {final_time} is not a multiple of k = {k}")));
    }
    Ok(n as usize)
}

fn check_finite(v: &[f64], stage: &'static str, t: f64) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { stage, t })
    }
}

/// Integrates `u0` from `t = 0` to `final_time`.
pub fn integrate<R: Reaction + ?Sized>(
    plan: &StepPlan,
    reaction: &R,
    u0: &Field,
    final_time: f64,
    snapshot_every: Option<usize>,
) -> Result<Integration> {
    Error::check_len(plan.ops.field_len(), u0.len())?;
    let n = step_count(plan.k, final_time)?;
    let (species, p) = (u0.species(), u0.p1d());
    let mut snapshots = Vec::new();
    let every = snapshot_every.filter(|&e| e > 0);
    if every.is_some() {
        snapshots.push((0.0, u0.clone()));
    }
    let mut record = |step: usize, v: &[f64]| -> Result<()> {
        if let Some(e) = every {
            if step.is_multiple_of(e) {
                snapshots.push((step as f64 * plan.k, Field::from_vec(species, p, v.to_vec())?));
            }
        }
        Ok(())
    };

    let field = if plan.scheme == Scheme::Sbdf4 {
        integrate_sbdf4(plan, reaction, u0, n, &mut record)?
    } else {
        let mut ws = Workspace::new(u0.len());
        let mut u = u0.as_slice().to_vec();
        let mut next = vec![0.0; u.len()];
        for step in 0..n {
            let t = step as f64 * plan.k;
            let smoothing = step < plan.opts.smoothing_steps;
            plan.step(reaction, t, &u, &mut next, &mut ws, smoothing)?;
            std::mem::swap(&mut u, &mut next);
            let stage = if smoothing { "smoothing step" } else { plan.scheme.name() };
            check_finite(&u, stage, t + plan.k)?;
            record(step + 1, &u)?;
        }
        u
    };
    Ok(Integration {
        field: Field::from_vec(species, p, field)?,
        steps: n,
        snapshots,
    })
}

fn integrate_sbdf4<R: Reaction + ?Sized>(
    plan: &StepPlan,
    reaction: &R,
    u0: &Field,
    n: usize,
    record: &mut dyn FnMut(usize, &[f64]) -> Result<()>,
) -> Result<Vec<f64>> {
    let sb = plan.sbdf.as_ref().ok_or_else(|| Error::Config("SBDF4 plan missing factors".into()))?;
    let k = plan.k;
    let len = u0.len();
    let mut fu = vec![0.0; len];
    // history newest first
    let mut us: Vec<Vec<f64>> = vec![u0.as_slice().to_vec()];
    let mut fs: Vec<Vec<f64>> = Vec::new();
    let mut u = u0.as_slice().to_vec();
    for step in 0..n.min(3) {
        let t = step as f64 * k;
        sb.startup_interval(reaction, t, &mut u, &mut fu)?;
        check_finite(&u, "sbdf1 startup", t + k)?;
        record(step + 1, &u)?;
        us.insert(0, u.clone());
    }
    if n <= 3 {
        return Ok(u);
    }
    for (l, v) in us.iter().enumerate() {
        let mut f = vec![0.0; len];
        reaction.eval(v, (3 - l) as f64 * k, &mut f);
        fs.push(f);
    }
    let mut next = vec![0.0; len];
    for step in 3..n {
        sb.sbdf4_step(
            [&us[0], &us[1], &us[2], &us[3]],
            [&fs[0], &fs[1], &fs[2], &fs[3]],
            &mut next,
        )?;
        let t = (step + 1) as f64 * k;
        check_finite(&next, "sbdf4", t)?;
        record(step + 1, &next)?;
        // rotate: oldest buffers are reused for the newest level
        let mut old_u = us.pop().expect("four levels");
        let mut old_f = fs.pop().expect("four levels");
        std::mem::swap(&mut old_u, &mut next);
        reaction.eval(&old_u, t, &mut old_f);
        us.insert(0, old_u);
        fs.insert(0, old_f);
    }
    Ok(us.swap_remove(0))
}
