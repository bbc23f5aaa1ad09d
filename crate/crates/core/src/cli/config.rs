//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;

use crate::analysis::{Coupling, GridRequest, Mode, StudyConfig};
use crate::error::{Error, Result};
use crate::problems::{make_problem, ProblemSpec};
use crate::steppers::Scheme;

/// Flags shared by `converge` and `solve`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Problem name (model_dirichlet, model_neumann, enzyme, enzyme_nonsmooth, brusselator)
    #[arg(long)]
    pub problem: Option<String>,
    /// etdrk4p22if, etdrk4p22, sbdf4 or smoother-only
    #[arg(long)]
    pub scheme: Option<String>,
    /// Coarsest time step of a convergence study
    #[arg(long)]
    pub k0: Option<f64>,
    /// Time step of a single solve
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Final time
    #[arg(long = "T")]
    pub final_time: Option<f64>,
    /// Interior nodes per axis
    #[arg(long)]
    pub m: Option<usize>,
    /// Target mesh width
    #[arg(long)]
    pub h: Option<f64>,
    /// k_eq_h or fixed_h
    #[arg(long)]
    pub coupling: Option<String>,
    /// exact or self
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub smoothing_steps: Option<usize>,
    /// Output CSV path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (1 = serial)
    #[arg(long)]
    pub threads: Option<usize>,
    /// key=value file; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key=value", no + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('-', "_");
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

const KEYS: [&str; 14] = [
    "problem",
    "scheme",
    "k0",
    "k",
    "levels",
    "T",
    "m",
    "h",
    "coupling",
    "mode",
    "smoothing_steps",
    "out",
    "threads",
    "snapshot_every",
];

/// Fully resolved configuration, validated against the problem registry.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemSpec,
    pub scheme: Scheme,
    pub k0: f64,
    pub k: f64,
    pub levels: usize,
    pub final_time: f64,
    pub grid: Option<GridRequest>,
    pub coupling: Coupling,
    pub mode: Mode,
    pub smoothing_steps: usize,
    pub out: Option<PathBuf>,
    pub threads: usize,
}

fn pick<T: FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|v| v.parse().map_err(|_| Error::Config(format!("invalid value '{v}' for {key}"))))
        .transpose()
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(p) => load_config(p)?,
            None => BTreeMap::new(),
        };
        Self::resolve_with(args, &file)
    }

    pub fn resolve_with(args: &RunArgs, file: &BTreeMap<String, String>) -> Result<Self> {
        if let Some(bad) = file.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(Error::Config(format!("unknown config key '{bad}'")));
        }
        let name: String = pick(args.problem.clone(), file, "problem")?
            .ok_or_else(|| Error::Config("--problem is required".into()))?;
        let problem = make_problem(&name)?;
        let scheme = match pick(args.scheme.clone(), file, "scheme")? {
            Some(s) => s.parse::<Scheme>()?,
            None => Scheme::Etdrk4p22If,
        };
        let default_mode = if problem.has_exact() { Mode::Exact } else { Mode::SelfReference };
        let mode = match pick(args.mode.clone(), file, "mode")? {
            Some(s) => s.parse()?,
            None => default_mode,
        };
        let coupling = match pick(args.coupling.clone(), file, "coupling")? {
            Some(s) => s.parse()?,
            None if mode == Mode::SelfReference => Coupling::FixedH,
            None => Coupling::KEqualsH,
        };
        let m: Option<usize> = pick(args.m, file, "m")?;
        let h: Option<f64> = pick(args.h, file, "h")?;
        let grid = match (m, h) {
            (Some(_), Some(_)) => return Err(Error::Config("give either --m or --h, not both".into())),
            (Some(m), None) => Some(GridRequest::Interior(m)),
            (None, Some(h)) if h > 0.0 => Some(GridRequest::Spacing(h)),
            (None, Some(h)) => return Err(Error::Config(format!("--h must be positive, got {h}"))),
            (None, None) => None,
        };
        let k0: f64 = pick(args.k0, file, "k0")?.unwrap_or(0.1);
        let k: f64 = pick(args.k, file, "k")?.unwrap_or(k0);
        let final_time = pick(args.final_time, file, "T")?.unwrap_or(problem.final_time);
        let cfg = Self {
            scheme,
            k0,
            k,
            levels: pick(args.levels, file, "levels")?.unwrap_or(4),
            final_time,
            grid,
            coupling,
            mode,
            smoothing_steps: pick(args.smoothing_steps, file, "smoothing_steps")?.unwrap_or(0),
            out: pick(args.out.clone(), file, "out")?,
            threads: pick(args.threads, file, "threads")?.unwrap_or(1),
            problem,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("k0", self.k0), ("k", self.k)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.final_time >= 0.0 && self.final_time.is_finite()) {
            return Err(Error::Config(format!("T must be nonnegative, got {}", self.final_time)));
        }
        if self.threads == 0 {
            return Err(Error::Config("--threads must be at least 1".into()));
        }
        if let Some(g) = &self.grid {
            g.grid(&self.problem).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn study(&self) -> StudyConfig {
        let mut s = StudyConfig::new(self.problem.clone(), self.scheme, self.k0, self.levels);
        s.mode = self.mode;
        s.coupling = self.coupling;
        s.final_time = self.final_time;
        s.smoothing_steps = self.smoothing_steps;
        s.grid = self.grid;
        s.parallel = self.threads > 1;
        s
    }
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}
