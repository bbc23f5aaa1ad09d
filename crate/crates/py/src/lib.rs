//! Python bindings: problems, grids, single-scheme integration and
//! refinement studies. Fields cross the boundary as flat lists in the
//! species-major, x-fastest layout used by the core crate.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use etdsplit::analysis::{
    observed_order as order_of, run_solve, run_study, Coupling, GridRequest, Mode, SolveRequest, StudyConfig,
};
use etdsplit::cli::{table_preset, TABLE_IDS};
use etdsplit::problems::{make_problem, ProblemKind, ProblemSpec, Reaction};
use etdsplit::spatial::{assemble_split, BoundaryKind, Grid2D};
use etdsplit::steppers::{integrate, PlanOptions, Scheme, StepPlan, Workspace};
use etdsplit::{Error, Field};

create_exception!(pyetdsplit, NumericalError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NonFinite { .. } | Error::Singular(_) | Error::Numerical(_) => NumericalError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn grid_request(cells: Option<usize>, h: Option<f64>) -> PyResult<Option<GridRequest>> {
    match (cells, h) {
        (Some(_), Some(_)) => Err(PyValueError::new_err("give either cells or h, not both")),
        (Some(c), None) => Ok(Some(GridRequest::Cells(c))),
        (None, Some(h)) => Ok(Some(GridRequest::Spacing(h))),
        (None, None) => Ok(None),
    }
}

/// Uniform square grid `[a, b]²`.
#[pyclass(name = "Grid", frozen)]
struct PyGrid {
    inner: Grid2D,
}

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (a, b, cells, boundary="dirichlet"))]
    fn new(a: f64, b: f64, cells: usize, boundary: &str) -> PyResult<Self> {
        let bc: BoundaryKind = parse(boundary)?;
        let inner = Grid2D::with_cells(a, b, cells, bc).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn cells(&self) -> usize {
        self.inner.cells()
    }

    /// Interior nodes per axis.
    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h()
    }

    /// Unknowns per axis.
    #[getter]
    fn p1d(&self) -> usize {
        self.inner.p1d()
    }

    #[getter]
    fn boundary(&self) -> String {
        self.inner.bc().to_string()
    }

    /// Coordinates of the unknowns along one axis.
    fn coords(&self) -> Vec<f64> {
        self.inner.coords()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(a={}, b={}, cells={}, boundary='{}')",
            self.inner.a(),
            self.inner.b(),
            self.inner.cells(),
            self.inner.bc()
        )
    }
}

/// One of the registered benchmark problems.
#[pyclass(name = "Problem", frozen)]
struct PyProblem {
    inner: ProblemSpec,
}

impl PyProblem {
    fn field(&self, grid: &PyGrid, values: Vec<f64>) -> PyResult<Field> {
        Field::from_vec(self.inner.species(), grid.inner.p1d(), values).map_err(to_py)
    }
}

#[pymethods]
impl PyProblem {
    #[new]
    fn new(name: &str) -> PyResult<Self> {
        Ok(Self {
            inner: make_problem(name).map_err(to_py)?,
        })
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    #[getter]
    fn species(&self) -> usize {
        self.inner.species()
    }

    #[getter]
    fn domain(&self) -> (f64, f64) {
        (self.inner.a, self.inner.b)
    }

    #[getter]
    fn boundary(&self) -> String {
        self.inner.bc.to_string()
    }

    #[getter]
    fn diffusion(&self) -> Vec<f64> {
        self.inner.diffusion.clone()
    }

    #[getter]
    fn final_time(&self) -> f64 {
        self.inner.final_time
    }

    #[getter]
    fn has_exact(&self) -> bool {
        self.inner.has_exact()
    }

    /// Grid by interval count or target spacing; the problem default otherwise.
    #[pyo3(signature = (cells=None, h=None))]
    fn grid(&self, cells: Option<usize>, h: Option<f64>) -> PyResult<PyGrid> {
        let inner = match grid_request(cells, h)? {
            Some(req) => req.grid(&self.inner),
            None => self.inner.default_grid(),
        }
        .map_err(to_py)?;
        Ok(PyGrid { inner })
    }

    fn initial(&self, grid: &PyGrid) -> Vec<f64> {
        self.inner.eval_initial(&grid.inner).into_vec()
    }

    fn exact(&self, grid: &PyGrid, t: f64) -> Option<Vec<f64>> {
        self.inner.eval_exact(&grid.inner, t).map(Field::into_vec)
    }

    /// Reaction term evaluated on a full field.
    #[pyo3(signature = (grid, u, t=0.0))]
    fn reaction(&self, grid: &PyGrid, u: Vec<f64>, t: f64) -> PyResult<Vec<f64>> {
        let u = self.field(grid, u)?;
        Ok(self.inner.eval_reaction(&u, t).map_err(to_py)?.into_vec())
    }

    fn __repr__(&self) -> String {
        format!("Problem('{}')", self.inner.name())
    }
}

/// A scheme bound to one problem, grid and step size, with its
/// factorizations built once.
#[pyclass(name = "Stepper", frozen)]
struct PyStepper {
    problem: ProblemSpec,
    grid: Grid2D,
    plan: StepPlan,
}

#[pymethods]
impl PyStepper {
    #[new]
    #[pyo3(signature = (problem, grid, k, scheme="etdrk4p22if", smoothing_steps=0, parallel=false))]
    fn new(problem: &PyProblem, grid: &PyGrid, k: f64, scheme: &str, smoothing_steps: usize, parallel: bool) -> PyResult<Self> {
        let scheme: Scheme = parse(scheme)?;
        let ops = assemble_split(&grid.inner, &problem.inner.diffusion).map_err(to_py)?;
        let opts = PlanOptions {
            smoothing_steps,
            parallel,
        };
        let plan = StepPlan::build(scheme, ops, k, opts).map_err(to_py)?;
        Ok(Self {
            problem: problem.inner.clone(),
            grid: grid.inner,
            plan,
        })
    }

    #[getter]
    fn k(&self) -> f64 {
        self.plan.k()
    }

    #[getter]
    fn scheme(&self) -> &'static str {
        self.plan.scheme().name()
    }

    #[getter]
    fn factorization_count(&self) -> usize {
        self.plan.factorization_count()
    }

    /// One step from `(t, u)`; `smoothing` uses the L-stable presmoother.
    #[pyo3(signature = (u, t=0.0, smoothing=false))]
    fn step(&self, py: Python<'_>, u: Vec<f64>, t: f64, smoothing: bool) -> PyResult<Vec<f64>> {
        py.detach(|| {
            let mut out = vec![0.0; u.len()];
            let mut ws = Workspace::new(u.len());
            self.plan
                .step(&self.problem as &dyn Reaction, t, &u, &mut out, &mut ws, smoothing)
                .map(|_| out)
        })
        .map_err(to_py)
    }

    /// Integrates from `t = 0` to `final_time`. With `snapshot_every`, also
    /// returns `(t, field)` pairs.
    #[pyo3(signature = (u0, final_time, snapshot_every=None))]
    fn integrate<'py>(
        &self,
        py: Python<'py>,
        u0: Vec<f64>,
        final_time: f64,
        snapshot_every: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let res = py
            .detach(|| {
                let u0 = Field::from_vec(self.problem.species(), self.grid.p1d(), u0)?;
                integrate(&self.plan, &self.problem, &u0, final_time, snapshot_every)
            })
            .map_err(to_py)?;
        let field = res.field.into_vec();
        if snapshot_every.is_none() {
            return field.into_pyobject(py).map(|o| o.into_any());
        }
        let snaps: Vec<(f64, Vec<f64>)> = res.snapshots.into_iter().map(|(t, f)| (t, f.into_vec())).collect();
        (field, snaps).into_pyobject(py).map(|o| o.into_any())
    }
}

/// Registered problem names.
#[pyfunction]
fn problems() -> Vec<&'static str> {
    ProblemKind::ALL.iter().map(|k| k.name()).collect()
}

/// Scheme names accepted by `solve`, `converge` and `Stepper`.
#[pyfunction]
fn schemes() -> Vec<&'static str> {
    Scheme::ALL.iter().map(|s| s.name()).collect()
}

/// `log2(coarse / fine)`, or `None` when undefined.
#[pyfunction]
fn observed_order(coarse: f64, fine: f64) -> Option<f64> {
    order_of(coarse, fine)
}

/// Runs one problem to its final time and returns a dict with the field.
#[pyfunction]
#[pyo3(signature = (problem, scheme="etdrk4p22if", k=0.1, final_time=None, cells=None, h=None, smoothing_steps=0))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    problem: &str,
    scheme: &str,
    k: f64,
    final_time: Option<f64>,
    cells: Option<usize>,
    h: Option<f64>,
    smoothing_steps: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = make_problem(problem).map_err(to_py)?;
    let scheme: Scheme = parse(scheme)?;
    let grid = match grid_request(cells, h)? {
        Some(req) => req.grid(&spec),
        None => spec.default_grid(),
    }
    .map_err(to_py)?;
    let final_time = final_time.unwrap_or(spec.final_time);
    let req = SolveRequest {
        problem: &spec,
        grid,
        scheme,
        k,
        final_time,
        options: PlanOptions {
            smoothing_steps,
            parallel: false,
        },
        snapshot_every: None,
    };
    let (res, seconds) = py.detach(|| run_solve(&req)).map_err(to_py)?;
    let error = spec
        .eval_exact(&grid, final_time)
        .map(|e| etdsplit::analysis::linf_error(&res.field, &e))
        .transpose()
        .map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("problem", spec.name())?;
    d.set_item("scheme", scheme.name())?;
    d.set_item("k", k)?;
    d.set_item("h", grid.h())?;
    d.set_item("p1d", grid.p1d())?;
    d.set_item("species", spec.species())?;
    d.set_item("steps", res.steps)?;
    d.set_item("seconds", seconds)?;
    d.set_item("error", error)?;
    d.set_item("field", res.field.into_vec())?;
    Ok(d)
}

/// Refinement study `k0, k0/2, …`; one dict per level.
#[pyfunction]
#[pyo3(signature = (
    problem, scheme="etdrk4p22if", k0=0.1, levels=4, mode=None, coupling=None,
    final_time=None, cells=None, h=None, smoothing_steps=0
))]
#[allow(clippy::too_many_arguments)]
fn converge<'py>(
    py: Python<'py>,
    problem: &str,
    scheme: &str,
    k0: f64,
    levels: usize,
    mode: Option<&str>,
    coupling: Option<&str>,
    final_time: Option<f64>,
    cells: Option<usize>,
    h: Option<f64>,
    smoothing_steps: usize,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let spec = make_problem(problem).map_err(to_py)?;
    let mode = match mode {
        Some(m) => parse(m)?,
        None if spec.has_exact() => Mode::Exact,
        None => Mode::SelfReference,
    };
    let coupling = match coupling {
        Some(c) => parse(c)?,
        None if mode == Mode::Exact => Coupling::KEqualsH,
        None => Coupling::FixedH,
    };
    let mut cfg = StudyConfig::new(spec, parse(scheme)?, k0, levels);
    cfg.mode = mode;
    cfg.coupling = coupling;
    cfg.smoothing_steps = smoothing_steps;
    cfg.grid = grid_request(cells, h)?;
    if let Some(t) = final_time {
        cfg.final_time = t;
    }
    let report = py.detach(|| run_study(&cfg)).map_err(to_py)?;
    report
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("k", r.k)?;
            d.set_item("h", r.h)?;
            d.set_item("m", r.m)?;
            d.set_item("error", r.error)?;
            d.set_item("order", r.order)?;
            d.set_item("seconds", r.seconds)?;
            Ok(d)
        })
        .collect()
}

/// Published values of a preset table, without running it.
#[pyfunction]
fn table<'py>(py: Python<'py>, id: &str) -> PyResult<Bound<'py, PyDict>> {
    let t = table_preset(id).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("id", t.id)?;
    d.set_item("title", t.title)?;
    d.set_item("problem", t.problem)?;
    d.set_item("k0", t.k0)?;
    d.set_item("mode", t.mode.to_string())?;
    d.set_item("coupling", t.coupling.to_string())?;
    d.set_item("final_time", t.final_time)?;
    d.set_item("cells", t.cells.to_vec())?;
    let cols = t
        .columns
        .iter()
        .map(|c| {
            let cd = PyDict::new(py);
            cd.set_item("label", c.label)?;
            cd.set_item("scheme", c.scheme.name())?;
            cd.set_item("smoothing_steps", c.smoothing_steps)?;
            cd.set_item("errors", c.errors.to_vec())?;
            cd.set_item("orders", c.orders.to_vec())?;
            cd.set_item("seconds", c.seconds.to_vec())?;
            Ok(cd)
        })
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("columns", cols)?;
    Ok(d)
}

#[pyfunction]
fn tables() -> Vec<&'static str> {
    TABLE_IDS.to_vec()
}

#[pymodule]
fn pyetdsplit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyStepper>()?;
    m.add_function(wrap_pyfunction!(problems, m)?)?;
    m.add_function(wrap_pyfunction!(schemes, m)?)?;
    m.add_function(wrap_pyfunction!(observed_order, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(converge, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add_function(wrap_pyfunction!(tables, m)?)?;
    Ok(())
}
