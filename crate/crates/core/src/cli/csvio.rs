//! CSV and plot output for convergence reports and solution fields.

use std::io::{Read, Write};

use crate::analysis::ConvergenceReport;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::spatial::Grid2D;

pub const REPORT_HEADER: [&str; 8] = ["scheme", "problem", "k", "h", "m", "error", "order", "seconds"];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// One parsed report line.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub scheme: String,
    pub problem: String,
    pub k: f64,
    pub h: f64,
    pub m: usize,
    pub error: Option<f64>,
    pub order: Option<f64>,
    pub seconds: f64,
}

pub fn write_reports<W: Write>(w: W, reports: &[ConvergenceReport]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    out.write_record(REPORT_HEADER)?;
    for r in reports {
        for row in &r.rows {
            out.write_record([
                r.scheme.name().to_string(),
                r.problem.clone(),
                fmt_f64(row.k),
                fmt_f64(row.h),
                row.m.to_string(),
                fmt_opt(row.error),
                fmt_opt(row.order),
                fmt_f64(row.seconds),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Config(format!("bad {what} value '{s}'")))
}

fn parse_opt(s: &str, what: &str) -> Result<Option<f64>> {
    if s.trim().is_empty() {
        Ok(None)
    } else {
        parse_num(s, what).map(Some)
    }
}

pub fn read_reports<R: Read>(r: R) -> Result<Vec<CsvRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(REPORT_HEADER) {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(CsvRow {
                scheme: rec[0].to_string(),
                problem: rec[1].to_string(),
                k: parse_num(&rec[2], "k")?,
                h: parse_num(&rec[3], "h")?,
                m: rec[4].trim().parse().map_err(|_| Error::Config(format!("bad m '{}'", &rec[4])))?,
                error: parse_opt(&rec[5], "error")?,
                order: parse_opt(&rec[6], "order")?,
                seconds: parse_num(&rec[7], "seconds")?,
            })
        })
        .collect()
}

/// Two-column `k error` data for log-log plotting, one block per report.
pub fn write_plot<W: Write>(mut w: W, reports: &[ConvergenceReport]) -> Result<()> {
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            writeln!(w, "\n")?;
        }
        writeln!(w, "# {} {} ({} mode)", r.scheme, r.problem, r.mode)?;
        writeln!(w, "# k error")?;
        for row in &r.rows {
            if let Some(e) = row.error {
                writeln!(w, "{} {}", fmt_f64(row.k), fmt_f64(e))?;
            }
        }
    }
    Ok(())
}

/// Field values on the grid nodes as `[t,]x,y,<species…>` rows.
pub fn write_fields<W: Write>(w: W, grid: &Grid2D, frames: &[(f64, &Field)], with_time: bool) -> Result<()> {
    let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let species = frames.first().map_or(1, |f| f.1.species());
    let mut header: Vec<String> = Vec::new();
    if with_time {
        header.push("t".into());
    }
    header.extend(["x".into(), "y".into()]);
    header.extend((0..species).map(|s| if species == 1 { "u".to_string() } else { format!("u{s}") }));
    out.write_record(&header)?;
    let coords = grid.coords();
    for (t, f) in frames {
        let p = f.p1d();
        for j in 0..p {
            for i in 0..p {
                let mut rec = Vec::with_capacity(header.len());
                if with_time {
                    rec.push(fmt_f64(*t));
                }
                rec.push(fmt_f64(coords[i]));
                rec.push(fmt_f64(coords[j]));
                rec.extend((0..species).map(|s| fmt_f64(f.at(s, i, j))));
                out.write_record(&rec)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
