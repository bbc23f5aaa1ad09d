//! Error norms, observed orders and refinement studies.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::problems::ProblemSpec;
use crate::spatial::{assemble_split, Grid2D};
use crate::steppers::{integrate, Integration, PlanOptions, Scheme, StepPlan};

/// Max-norm of `u − v` over all species and unknowns.
pub fn linf_error(u: &Field, v: &Field) -> Result<f64> {
    u.same_shape(v)?;
    Ok(u.as_slice().iter().zip(v.as_slice()).fold(0.0, |m, (a, b)| m.max((a - b).abs())))
}

/// `log₂(coarse/fine)`; `None` unless both errors are positive and finite.
pub fn observed_order(coarse: f64, fine: f64) -> Option<f64> {
    let ok = |e: f64| e > 0.0 && e.is_finite();
    (ok(coarse) && ok(fine)).then(|| (coarse / fine).log2())
}

/// Runs `f` and returns its value with the elapsed wall time in seconds.
pub fn time_run<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Compare against the exact solution.
    Exact,
    /// Compare each run with the next one at half the step.
    SelfReference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// Halve `h` together with `k` (mesh intervals double each level).
    KEqualsH,
    /// Keep one spatial grid for every level.
    FixedH,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::SelfReference => "self",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "self" | "self_reference" => Ok(Mode::SelfReference),
            _ => Err(Error::Config(format!("unknown mode '{s}' (expected exact or self)"))),
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coupling::KEqualsH => "k_eq_h",
            Coupling::FixedH => "fixed_h",
        })
    }
}

impl FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k_eq_h" | "k_equals_h" => Ok(Coupling::KEqualsH),
            "fixed_h" => Ok(Coupling::FixedH),
            _ => Err(Error::Config(format!("unknown coupling '{s}' (expected k_eq_h or fixed_h)"))),
        }
    }
}

/// Spatial resolution request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridRequest {
    /// Mesh intervals per axis (`m + 1`).
    Cells(usize),
    /// Interior unknowns per axis (`m`).
    Interior(usize),
    /// Target spacing; the interval count is rounded to the nearest integer.
    Spacing(f64),
}

impl GridRequest {
    pub fn grid(&self, problem: &ProblemSpec) -> Result<Grid2D> {
        match *self {
            GridRequest::Cells(c) => problem.grid_with_cells(c),
            GridRequest::Interior(m) => Grid2D::new(problem.a, problem.b, m, problem.bc),
            GridRequest::Spacing(h) => problem.grid_for_h(h),
        }
    }
}

/// Runs one problem to `final_time`; wall time includes plan construction.
#[derive(Debug, Clone)]
pub struct SolveRequest<'a> {
    pub problem: &'a ProblemSpec,
    pub grid: Grid2D,
    pub scheme: Scheme,
    pub k: f64,
    pub final_time: f64,
    pub options: PlanOptions,
    pub snapshot_every: Option<usize>,
}

pub fn run_solve(req: &SolveRequest<'_>) -> Result<(Integration, f64)> {
    let (res, secs) = time_run(|| {
        let ops = assemble_split(&req.grid, &req.problem.diffusion)?;
        let plan = StepPlan::build(req.scheme, ops, req.k, req.options)?;
        let u0 = req.problem.eval_initial(&req.grid);
        integrate(&plan, req.problem, &u0, req.final_time, req.snapshot_every)
    });
    Ok((res?, secs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub problem: ProblemSpec,
    pub scheme: Scheme,
    pub k0: f64,
    pub levels: usize,
    pub mode: Mode,
    pub coupling: Coupling,
    pub final_time: f64,
    pub smoothing_steps: usize,
    /// Grid of the first level; the problem default when absent.
    pub grid: Option<GridRequest>,
    /// Explicit interval counts per level, overriding `grid` and the coupling rule.
    pub level_cells: Option<Vec<usize>>,
    pub parallel: bool,
}

impl StudyConfig {
    pub fn new(problem: ProblemSpec, scheme: Scheme, k0: f64, levels: usize) -> Self {
        let final_time = problem.final_time;
        Self {
            problem,
            scheme,
            k0,
            levels,
            mode: Mode::Exact,
            coupling: Coupling::KEqualsH,
            final_time,
            smoothing_steps: 0,
            grid: None,
            level_cells: None,
            parallel: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            return Err(Error::Config("levels must be at least 1".into()));
        }
        if !(self.k0 > 0.0 && self.k0.is_finite()) {
            return Err(Error::Config(format!("k0 must be positive, got {}", self.k0)));
        }
        if self.mode == Mode::Exact && !self.problem.has_exact() {
            return Err(Error::Config(format!(
                "{} has no exact solution; use self-reference mode",
                self.problem.name()
            )));
        }
        if self.mode == Mode::SelfReference && self.coupling != Coupling::FixedH {
            return Err(Error::Config("self-reference mode needs fixed_h coupling".into()));
        }
        if let Some(c) = &self.level_cells {
            if c.len() < self.levels {
                return Err(Error::Config(format!("{} level grids given for {} levels", c.len(), self.levels)));
            }
        }
        Ok(())
    }

    /// Grid of level `l` (0 = coarsest).
    pub fn level_grid(&self, l: usize) -> Result<Grid2D> {
        if let Some(c) = &self.level_cells {
            return self.problem.grid_with_cells(c[l.min(c.len() - 1)]);
        }
        let base = match &self.grid {
            Some(req) => req.grid(&self.problem)?,
            None => self.problem.default_grid()?,
        };
        match self.coupling {
            Coupling::FixedH => Ok(base),
            Coupling::KEqualsH => self.problem.grid_with_cells(base.cells() << l),
        }
    }

    pub fn level_k(&self, l: usize) -> f64 {
        self.k0 / f64::powi(2.0, l as i32)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub k: f64,
    pub h: f64,
    pub m: usize,
    /// `None` when the run diverged.
    pub error: Option<f64>,
    pub order: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scheme: Scheme,
    pub problem: String,
    pub mode: Mode,
    pub coupling: Coupling,
    /// Ordered by decreasing `k`.
    pub rows: Vec<ReportRow>,
}

impl ConvergenceReport {
    pub fn errors(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.error).collect()
    }

    pub fn orders(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.order).collect()
    }

    /// Index of the first diverged level.
    pub fn first_failure(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.error.is_none())
    }

    fn fill_orders(&mut self) {
        for l in 1..self.rows.len() {
            self.rows[l].order = match (self.rows[l - 1].error, self.rows[l].error) {
                (Some(c), Some(f)) => observed_order(c, f),
                _ => None,
            };
        }
    }
}

fn diverged(e: &Error) -> bool {
    matches!(e, Error::NonFinite { .. })
}

/// Runs a refinement cascade `k0, k0/2, …`.
///
/// Self-reference mode runs one extra level so every reported `k` has a
/// finer partner.
pub fn run_study(cfg: &StudyConfig) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let runs = match cfg.mode {
        Mode::Exact => cfg.levels,
        Mode::SelfReference => cfg.levels + 1,
    };
    let options = PlanOptions {
        smoothing_steps: cfg.smoothing_steps,
        parallel: cfg.parallel,
    };
    let mut fields: Vec<Option<Field>> = Vec::with_capacity(runs);
    let mut rows = Vec::with_capacity(cfg.levels);
    for l in 0..runs {
        let grid = cfg.level_grid(l)?;
        let k = cfg.level_k(l);
        let req = SolveRequest {
            problem: &cfg.problem,
            grid,
            scheme: cfg.scheme,
            k,
            final_time: cfg.final_time,
            options,
            snapshot_every: None,
        };
        let (field, seconds) = match run_solve(&req) {
            Ok((r, s)) => (Some(r.field), s),
            Err(e) if diverged(&e) => (None, f64::NAN),
            Err(e) => return Err(e),
        };
        if l < cfg.levels {
            let error = match (cfg.mode, &field) {
                (Mode::Exact, Some(u)) => {
                    let exact = cfg.problem.eval_exact(&grid, cfg.final_time).expect("validated");
                    Some(linf_error(u, &exact)?).filter(|e| e.is_finite())
                }
                _ => None,
            };
            rows.push(ReportRow {
                k,
                h: grid.h(),
                m: grid.m(),
                error,
                order: None,
                seconds,
            });
        }
        fields.push(field);
    }
    if cfg.mode == Mode::SelfReference {
        for l in 0..cfg.levels {
            rows[l].error = match (&fields[l], &fields[l + 1]) {
                (Some(a), Some(b)) => Some(linf_error(a, b)?).filter(|e| e.is_finite()),
                _ => None,
            };
        }
    }
    let mut report = ConvergenceReport {
        scheme: cfg.scheme,
        problem: cfg.problem.name().to_string(),
        mode: cfg.mode,
        coupling: cfg.coupling,
        rows,
    };
    report.fill_orders();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_problem;

    #[test]
    fn linf_basics() {
        let u = Field::zeros(1, 3);
        assert_eq!(linf_error(&u, &u).unwrap(), 0.0);
        let mut v = u.clone();
        v.as_mut_slice()[4] = 3e-5;
        assert_eq!(linf_error(&u, &v).unwrap(), 3e-5);
        assert!(linf_error(&u, &Field::zeros(1, 4)).is_err());
    }

    #[test]
    fn orders() {
        assert!((observed_order(1.639e-7, 1.0805e-8).unwrap() - 3.92).abs() < 0.005);
        assert!((observed_order(4.2433e-7, 7.2737e-9).unwrap() - 5.87).abs() < 0.005);
        assert_eq!(observed_order(1.0, 1.0 / 16.0), Some(4.0));
        assert_eq!(observed_order(0.0, 1.0), None);
        assert_eq!(observed_order(1.0, f64::NAN), None);
    }

    #[test]
    fn timing_nonnegative() {
        let ((), s) = time_run(|| ());
        assert!(s >= 0.0);
    }

    #[test]
    fn level_grids() {
        let mut cfg = StudyConfig::new(make_problem("model_dirichlet").unwrap(), Scheme::Etdrk4p22If, 0.1, 3);
        assert_eq!(cfg.level_grid(2).unwrap().cells(), 160);
        cfg.coupling = Coupling::FixedH;
        cfg.grid = Some(GridRequest::Spacing(0.05));
        assert_eq!(cfg.level_grid(2).unwrap().cells(), 63);
        cfg.level_cells = Some(vec![42, 82, 162]);
        assert_eq!(cfg.level_grid(1).unwrap().cells(), 82);
        assert!((cfg.level_k(2) - 0.025).abs() < 1e-16);
    }

    #[test]
    fn single_level_has_no_order() {
        let mut cfg = StudyConfig::new(make_problem("model_dirichlet").unwrap(), Scheme::Etdrk4p22If, 0.25, 1);
        cfg.grid = Some(GridRequest::Cells(8));
        let r = run_study(&cfg).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].order.is_none() && r.rows[0].error.unwrap() > 0.0);
    }

    #[test]
    fn rejects_invalid_studies() {
        let mut cfg = StudyConfig::new(make_problem("enzyme").unwrap(), Scheme::Etdrk4p22If, 0.1, 2);
        assert!(run_study(&cfg).is_err());
        cfg.mode = Mode::SelfReference;
        assert!(run_study(&cfg).is_err());
        cfg.coupling = Coupling::FixedH;
        cfg.levels = 0;
        assert!(run_study(&cfg).is_err());
    }

    #[test]
    fn self_reference_deterministic() {
        let mut cfg = StudyConfig::new(make_problem("enzyme").unwrap(), Scheme::Etdrk4p22If, 0.1, 2);
        cfg.mode = Mode::SelfReference;
        cfg.coupling = Coupling::FixedH;
        cfg.grid = Some(GridRequest::Cells(10));
        let a = run_study(&cfg).unwrap();
        let b = run_study(&cfg).unwrap();
        assert_eq!(a.errors(), b.errors());
        assert!(a.rows[1].error.unwrap() < a.rows[0].error.unwrap());
    }
}
