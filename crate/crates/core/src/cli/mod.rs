//! `etdsplit` command-line harness.
//!
//! ```text
//! etdsplit converge --problem model_dirichlet --scheme etdrk4p22if --k0 0.1 --levels 4 --T 1
//! etdsplit solve --problem enzyme_nonsmooth --k 0.1 --smoothing-steps 3 --out u.csv
//! etdsplit table 1
//! ```
//!
//! Exit codes: `0` success, `1` invalid configuration or I/O failure,
//! `2` numerical failure (non-finite values or a singular factorization).

mod config;
mod csvio;
mod tables;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{linf_error, run_solve, run_study, ConvergenceReport, GridRequest, SolveRequest};
use crate::error::{Error, Result};
use crate::steppers::PlanOptions;

pub use config::{load_config, parse_config_text, RunArgs, RunConfig};
pub use csvio::{fmt_f64, read_reports, write_fields, write_plot, write_reports, CsvRow, REPORT_HEADER};
pub use tables::{relative_deviation, table_preset, PublishedColumn, TablePreset, TABLE_IDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "etdsplit", version, about = "Fourth-order ETD solvers for 2-D reaction-diffusion benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a refinement study and report errors and observed orders
    Converge {
        #[command(flatten)]
        run: RunArgs,
        /// Also write two-column (k, error) plot data here
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Integrate one problem and write the final field
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Also record the field every N steps
        #[arg(long)]
        snapshot_every: Option<usize>,
    },
    /// Reproduce a published convergence table
    Table(TableArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// 1, 2, 3, 4, 5, A1, A2, A3 or A5-sbdf
    pub id: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonFinite { .. } | Error::Singular(_) | Error::Numerical(_) => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

/// Sets the worker count for line solves, stage concurrency and sparse LU.
///
/// Returns whether the steppers should run their parallel paths.
pub fn configure_threads(threads: usize) -> bool {
    if threads > 1 {
        faer::set_global_parallelism(faer::Par::rayon(threads));
        // the global pool can be built only once; later calls keep the first size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        true
    } else {
        faer::set_global_parallelism(faer::Par::Seq);
        false
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let res = match cli.command {
        Command::Converge { run, plot } => cmd_converge(&run, plot.as_deref(), out),
        Command::Solve { run, snapshot_every } => cmd_solve(&run, snapshot_every, out),
        Command::Table(t) => cmd_table(&t, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn fmt_opt(x: Option<f64>, prec: usize) -> String {
    match x {
        Some(v) => format!("{v:.prec$e}"),
        None => "--".into(),
    }
}

/// Aligned plaintext rendering of a report.
pub fn render_report(r: &ConvergenceReport) -> String {
    let mut s = format!("{} on {} ({} mode, {})\n", r.scheme, r.problem, r.mode, r.coupling);
    s += &format!("{:>10} {:>10} {:>6} {:>12} {:>7} {:>10}\n", "k", "h", "m", "error", "order", "seconds");
    for row in &r.rows {
        s += &format!(
            "{:>10.5} {:>10.5} {:>6} {:>12} {:>7} {:>10.3}\n",
            row.k,
            row.h,
            row.m,
            fmt_opt(row.error, 4),
            row.order.map_or("--".into(), |o| format!("{o:.2}")),
            row.seconds
        );
    }
    s
}

fn check_failures(r: &ConvergenceReport) -> Result<()> {
    match r.first_failure() {
        Some(l) => Err(level_failure(r, l)),
        None => Ok(()),
    }
}

fn level_failure(r: &ConvergenceReport, l: usize) -> Error {
    Error::Numerical(format!(
        "{} on {} diverged at level {} (k = {}, m = {})",
        r.scheme,
        r.problem,
        l + 1,
        r.rows[l].k,
        r.rows[l].m
    ))
}

pub fn cmd_converge(args: &RunArgs, plot: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::resolve(args)?;
    let mut study = cfg.study();
    study.parallel = configure_threads(cfg.threads);
    let report = run_study(&study)?;
    out.write_all(render_report(&report).as_bytes())?;
    if let Some(p) = &cfg.out {
        write_reports(create(p)?, std::slice::from_ref(&report))?;
    }
    if let Some(p) = plot {
        write_plot(create(p)?, std::slice::from_ref(&report))?;
    }
    check_failures(&report)?;
    Ok(EXIT_OK)
}

pub fn cmd_solve(args: &RunArgs, snapshot_every: Option<usize>, out: &mut dyn Write) -> Result<i32> {
    let cfg = RunConfig::resolve(args)?;
    let snapshot_every = match snapshot_every {
        Some(n) => Some(n),
        None => match &args.config {
            Some(p) => load_config(p)?
                .get("snapshot_every")
                .map(|v| v.parse().map_err(|_| Error::Config(format!("invalid snapshot_every '{v}'"))))
                .transpose()?,
            None => None,
        },
    };
    let parallel = configure_threads(cfg.threads);
    let grid = cfg
        .grid
        .unwrap_or(GridRequest::Cells(cfg.problem.default_cells))
        .grid(&cfg.problem)?;
    let req = SolveRequest {
        problem: &cfg.problem,
        grid,
        scheme: cfg.scheme,
        k: cfg.k,
        final_time: cfg.final_time,
        options: PlanOptions {
            smoothing_steps: cfg.smoothing_steps,
            parallel,
        },
        snapshot_every,
    };
    let (res, secs) = run_solve(&req)?;
    let u = &res.field;
    writeln!(
        out,
        "{} on {}: m = {}, h = {:.6}, k = {}, {} steps to T = {} in {:.3} s",
        cfg.scheme,
        cfg.problem.name(),
        grid.m(),
        grid.h(),
        cfg.k,
        res.steps,
        cfg.final_time,
        secs
    )?;
    let (lo, hi) = u.as_slice().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    writeln!(out, "min = {lo:.10e}, max = {hi:.10e}, max|U| = {:.10e}", u.max_abs())?;
    if let Some(exact) = cfg.problem.eval_exact(&grid, cfg.final_time) {
        writeln!(out, "max error vs exact = {:.6e}", linf_error(u, &exact)?)?;
    }
    if let Some(p) = &cfg.out {
        if res.snapshots.is_empty() {
            write_fields(create(p)?, &grid, &[(cfg.final_time, u)], false)?;
        } else {
            let frames: Vec<(f64, &crate::Field)> = res.snapshots.iter().map(|(t, f)| (*t, f)).collect();
            write_fields(create(p)?, &grid, &frames, true)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_table(args: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    let preset = table_preset(&args.id)?;
    let parallel = configure_threads(args.threads.unwrap_or(1));
    writeln!(out, "Table {}: {}", preset.id, preset.title)?;
    if let Some(n) = preset.notice {
        writeln!(out, "note: {n}")?;
    }
    let mut reports = Vec::new();
    for column in &preset.columns {
        let mut study = preset.study(column)?;
        study.parallel = parallel;
        let report = run_study(&study)?;
        writeln!(out, "\n{}", column.label)?;
        writeln!(
            out,
            "{:>9} {:>8} {:>12} {:>12} {:>8} {:>6} {:>6} {:>9} {:>9}",
            "k", "h", "error", "published", "rel.dev", "p", "pub.p", "seconds", "pub.sec"
        )?;
        for (l, row) in report.rows.iter().enumerate() {
            let dev = row.error.map(|e| relative_deviation(e, column.errors[l]));
            writeln!(
                out,
                "{:>9.5} {:>8.4} {:>12} {:>12.4e} {:>8} {:>6} {:>6} {:>9.3} {:>9.3}",
                row.k,
                row.h,
                fmt_opt(row.error, 4),
                column.errors[l],
                dev.map_or("--".into(), |d| format!("{:+.1}%", 100.0 * d)),
                row.order.map_or("--".into(), |o| format!("{o:.2}")),
                if l == 0 { "--".into() } else { format!("{:.2}", column.orders[l - 1]) },
                row.seconds,
                column.seconds[l]
            )?;
        }
        check_failures(&report)?;
        reports.push(report);
    }
    if let Some(p) = &args.out {
        write_reports(create(p)?, &reports)?;
    }
    Ok(EXIT_OK)
}
