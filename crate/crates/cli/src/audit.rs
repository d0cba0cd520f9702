//! Tabular form of the printed-formula audit.

use laqc_core::audit::{audit_printed_formulas, AuditGrid, AuditReport, Classification};
use serde_json::json;

use crate::config::Config;
use crate::output::{Cell, Table};
use crate::CliResult;

pub const AUDIT_HEADER: [&str; 16] = [
    "id",
    "family",
    "grid_points",
    "points",
    "skipped",
    "undefined",
    "max_deviation",
    "mean_deviation",
    "fraction_above_tol",
    "fit_factor",
    "fit_residual",
    "argmax_p_ab",
    "argmax_p_cd",
    "argmax_xi",
    "classification",
    "note",
];

pub fn audit_grid(cfg: &Config) -> CliResult<AuditGrid> {
    let n = cfg.density.unwrap_or(11);
    if n < 2 {
        return Err(format!("audit density must be at least 2, got {n}").into());
    }
    Ok(AuditGrid { params: n, xi: n, ..AuditGrid::default() })
}

pub fn run(cfg: &Config) -> CliResult<(AuditReport, Table, serde_json::Value)> {
    let report = audit_printed_formulas(&audit_grid(cfg)?)?;
    let mut table = Table::new(AUDIT_HEADER.to_vec());
    let nan_empty = |v: f64| if v.is_finite() { Cell::Num(v) } else { Cell::Empty };
    for e in &report.entries {
        let p = &e.profile;
        table.push(vec![
            e.id.into(),
            e.family.map_or(Cell::Empty, |f| f.name().into()),
            Cell::Int(e.grid_points as u64),
            Cell::Int(p.points as u64),
            Cell::Int(p.skipped as u64),
            Cell::Int(p.undefined as u64),
            p.max_abs.into(),
            p.mean_abs.into(),
            p.fraction_above_tol.into(),
            Cell::opt(p.fit_factor),
            Cell::opt(p.fit_residual),
            nan_empty(p.argmax[0]),
            nan_empty(p.argmax[1]),
            nan_empty(p.argmax[2]),
            e.classification.as_str().into(),
            e.note.as_str().into(),
        ]);
    }
    let confirmed = report.entries.iter().filter(|e| e.classification == Classification::Confirmed).count();
    let summary = json!({
        "entries": report.entries.len(),
        "confirmed": confirmed,
        "discrepant": report.entries.len() - confirmed,
        "probability_scale": report.probability_scale,
    });
    Ok((report, table, summary))
}
