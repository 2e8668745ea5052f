//! CSV output of sweep records, one row per (cell, engine).

use std::io::Write;

use cev_core::Engine;

use crate::error::BenchError;
use crate::sweep::{BenchmarkRecord, EngineOutcome, SweepReport};

pub const SWEEP_HEADER: [&str; 9] = [
    "sigma",
    "alpha",
    "maturity",
    "engine",
    "price",
    "abs_err",
    "rel_err",
    "time_ns",
    "diagnostics",
];

fn field(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn diagnostics_field(o: &EngineOutcome) -> String {
    match &o.failure {
        Some(f) => format!("error={}: {}", f.name, f.message),
        None => o.diagnostics.to_string(),
    }
}

fn row(rec: &BenchmarkRecord, o: &EngineOutcome) -> [String; 9] {
    let errors = o.engine != Engine::Ncx2;
    [
        rec.sigma.to_string(),
        rec.alpha.to_string(),
        rec.maturity.to_string(),
        o.engine.to_string(),
        field(o.price),
        if errors {
            field(rec.abs_err(o.engine))
        } else {
            String::new()
        },
        if errors {
            field(rec.rel_err(o.engine))
        } else {
            String::new()
        },
        o.timing.map(|t| t.median.to_string()).unwrap_or_default(),
        diagnostics_field(o),
    ]
}

/// Writes the header and one row per engine per cell. `abs_err` and
/// `rel_err` compare each engine with the ncx2 benchmark of the same cell.
pub fn write_sweep_csv<W: Write>(report: &SweepReport, out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for rec in &report.records {
        for o in &rec.outcomes {
            w.write_record(row(rec, o))?;
        }
    }
    w.flush().map_err(|e| BenchError::io("csv output", e))?;
    Ok(())
}
