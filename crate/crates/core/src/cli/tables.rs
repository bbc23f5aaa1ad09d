//! Preset refinement studies for the published convergence tables, with the
//! published values for side-by-side comparison.

use crate::analysis::{Coupling, GridRequest, Mode, StudyConfig};
use crate::error::{Error, Result};
use crate::problems::make_problem;
use crate::steppers::Scheme;

/// Published column of one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedColumn {
    pub label: &'static str,
    pub scheme: Scheme,
    pub smoothing_steps: usize,
    pub errors: [f64; 4],
    /// Orders for levels 2..4.
    pub orders: [f64; 3],
    pub seconds: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TablePreset {
    pub id: &'static str,
    pub title: &'static str,
    pub problem: &'static str,
    pub k0: f64,
    pub mode: Mode,
    pub coupling: Coupling,
    pub final_time: f64,
    /// Mesh intervals per axis for each level.
    pub cells: [usize; 4],
    pub columns: Vec<PublishedColumn>,
    pub notice: Option<&'static str>,
}

pub const TABLE_IDS: [&str; 9] = ["1", "2", "3", "4", "5", "A1", "A2", "A3", "A5-sbdf"];

const SPLIT_ONLY: &str = "ETDRDP-IF columns are not reproduced (scheme out of scope).";

fn col(
    label: &'static str,
    scheme: Scheme,
    smoothing_steps: usize,
    errors: [f64; 4],
    orders: [f64; 3],
    seconds: [f64; 4],
) -> PublishedColumn {
    PublishedColumn {
        label,
        scheme,
        smoothing_steps,
        errors,
        orders,
        seconds,
    }
}

pub fn table_preset(id: &str) -> Result<TablePreset> {
    use Scheme::*;
    let exact = |id, title, problem, cells, columns| TablePreset {
        id,
        title,
        problem,
        k0: 0.1,
        mode: Mode::Exact,
        coupling: Coupling::KEqualsH,
        final_time: 1.0,
        cells,
        columns,
        notice: None,
    };
    let selfref = |id, title, problem, k0, cells: usize, final_time, columns| TablePreset {
        id,
        title,
        problem,
        k0,
        mode: Mode::SelfReference,
        coupling: Coupling::FixedH,
        final_time,
        cells: [cells; 4],
        columns,
        notice: None,
    };
    let preset = match id {
        "1" => exact(
            "1",
            "Model problem, Dirichlet, exact solution, k = h",
            "model_dirichlet",
            [40, 80, 160, 320],
            vec![
                col("ETDRK4P22-IF", Etdrk4p22If, 0, [1.639e-7, 1.0805e-8, 6.958e-10, 4.456e-11], [3.92, 3.96, 3.96], [0.06, 0.08, 0.65, 3.72]),
                col("ETDRK4P22", Etdrk4p22, 0, [9.069e-7, 5.6131e-8, 3.496e-9, 2.1391e-10], [4.01, 4.01, 4.03], [0.02, 0.35, 5.21, 79.70]),
            ],
        ),
        "2" => exact(
            "2",
            "Model problem, Neumann, exact solution, k = h",
            "model_neumann",
            [63, 126, 252, 504],
            vec![
                col("ETDRK4P22-IF", Etdrk4p22If, 0, [1.0836e-5, 6.8127e-7, 4.2638e-8, 2.6657e-9], [3.99, 4.00, 4.00], [0.003, 0.012, 0.081, 1.961]),
                col("ETDRK4P22", Etdrk4p22, 0, [1.1580e-5, 7.2661e-7, 4.5439e-8, 2.8397e-9], [3.99, 4.00, 4.00], [0.002, 0.042, 0.732, 10.703]),
            ],
        ),
        "3" => selfref(
            "3",
            "Enzyme kinetics, h = 0.05, coarse-to-fine errors",
            "enzyme",
            0.1,
            20,
            1.0,
            vec![
                col("ETDRK4P22-IF", Etdrk4p22If, 0, [4.2433e-7, 7.2737e-9, 4.666e-10, 3.0407e-11], [5.87, 3.96, 3.94], [0.003, 0.007, 0.012, 0.023]),
                col("ETDRK4P22", Etdrk4p22, 0, [1.9274e-6, 1.1628e-7, 7.1638e-9, 4.4488e-10], [4.05, 4.02, 4.01], [0.004, 0.008, 0.014, 0.028]),
            ],
        ),
        "4" => selfref(
            "4",
            "Non-smooth enzyme kinetics, h = 0.05, with and without presmoothing",
            "enzyme_nonsmooth",
            0.1,
            20,
            1.0,
            vec![
                col("ETDRK4P22-IF", Etdrk4p22If, 0, [6.1306e-3, 2.0160e-5, 7.2147e-11, 4.7483e-15], [8.25, 18.09, 13.89], [0.002, 0.003, 0.006, 0.013]),
                col("ETDRK4P22-IFs", Etdrk4p22If, 3, [1.0894e-9, 9.9321e-11, 8.5536e-12, 6.2814e-13], [3.46, 3.54, 3.77], [0.002, 0.004, 0.007, 0.013]),
            ],
        ),
        "5" => selfref(
            "5",
            "Brusselator, h = 0.0125, T = 2, coarse-to-fine errors",
            "brusselator",
            0.05,
            80,
            2.0,
            vec![
                col("ETDRK4P22-IF", Etdrk4p22If, 0, [3.1532e-4, 1.7359e-5, 1.0814e-6, 6.7987e-8], [4.18, 4.00, 3.99], [0.160, 0.303, 0.603, 1.172]),
                col("ETDRK4P22", Etdrk4p22, 0, [3.1384e-4, 1.7592e-5, 1.1859e-6, 7.6968e-8], [4.16, 3.89, 3.95], [1.486, 2.948, 5.879, 11.836]),
            ],
        ),
        "A1" => exact(
            "A1",
            "SBDF4, model problem, Dirichlet",
            "model_dirichlet",
            [40, 80, 160, 320],
            vec![col("SBDF4", Sbdf4, 0, [2.2150e-4, 1.2419e-5, 7.752e-7, 6.1782e-8], [4.16, 4.00, 3.65], [1.145, 14.823, 115.230, 1209.314])],
        ),
        "A2" => exact(
            "A2",
            "SBDF4, model problem, Neumann",
            "model_neumann",
            [42, 82, 162, 322],
            vec![col("SBDF4", Sbdf4, 0, [2.3248e-4, 1.3094e-5, 8.1722e-7, 6.4410e-8], [4.15, 4.00, 3.67], [0.189, 1.198, 14.316, 114.896])],
        ),
        "A3" => selfref(
            "A3",
            "SBDF4, enzyme kinetics, h = 0.05",
            "enzyme",
            0.1,
            20,
            1.0,
            vec![col("SBDF4", Sbdf4, 0, [3.3077e-4, 1.6554e-5, 8.4646e-7, 4.2354e-8], [4.32, 4.29, 4.32], [0.1511, 0.1437, 0.1464, 0.1560])],
        ),
        "A5-sbdf" => selfref(
            "A5-sbdf",
            "SBDF4, Brusselator, h = 0.0125, T = 2",
            "brusselator",
            0.05,
            80,
            2.0,
            vec![col("SBDF4", Sbdf4, 0, [6.7785e-2, 1.4339e-3, 1.0627e-4, 6.8328e-6], [5.56, 3.75, 3.96], [31.672, 31.391, 33.662, 34.430])],
        ),
        _ => return Err(Error::Config(format!("unknown table '{id}' (known: {})", TABLE_IDS.join(", ")))),
    };
    let notice = match id {
        "A3" => Some("Published grid h = 0.1653 conflicts with the main table; h = 0.05 is used."),
        s if s.starts_with('A') => Some(SPLIT_ONLY),
        _ => None,
    };
    Ok(TablePreset { notice, ..preset })
}

impl TablePreset {
    /// Study configuration reproducing one column.
    pub fn study(&self, column: &PublishedColumn) -> Result<StudyConfig> {
        let mut s = StudyConfig::new(make_problem(self.problem)?, column.scheme, self.k0, 4);
        s.mode = self.mode;
        s.coupling = self.coupling;
        s.final_time = self.final_time;
        s.smoothing_steps = column.smoothing_steps;
        match self.coupling {
            Coupling::FixedH => s.grid = Some(GridRequest::Cells(self.cells[0])),
            Coupling::KEqualsH => s.level_cells = Some(self.cells.to_vec()),
        }
        Ok(s)
    }
}

/// `(ours − published)/published`.
pub fn relative_deviation(ours: f64, published: f64) -> f64 {
    (ours - published) / published
}
