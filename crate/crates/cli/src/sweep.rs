//! Family sweeps (LAQC and concurrence of the single-state families) and
//! swap sweeps (post-swap Bloch parameters and quantifiers).

use laqc_core::correlations::{concurrence, concurrence_family, laqc_family, laqc_oracle, OracleMode};
use laqc_core::swap::{swap_family, swap_raw, MeasurementState};
use laqc_core::{make_family, Error, FamilyId, FamilyTag};
use rayon::prelude::*;
use serde_json::json;

use crate::config::{Config, Slice, XiSpec};
use crate::output::{Cell, Table};
use crate::CliResult;

/// Oracle spot checks flag a row when the numerical LAQC differs from the
/// family formula by more than this.
pub const SPOT_LAQC_TOL: f64 = 1e-4;
pub const SPOT_CONCURRENCE_TOL: f64 = 1e-10;

pub const FAMILY_HEADER: [&str; 7] = ["family", "param", "laqc", "concurrence", "laqc_oracle", "concurrence_matrix", "status"];

pub const SWAP_HEADER: [&str; 14] =
    ["family", "p_ab", "p_cd", "xi", "x3", "y3", "t1", "t2", "t3", "norm", "prob", "laqc", "concurrence", "status"];

pub struct SweepOutput {
    pub table: Table,
    pub summary: serde_json::Value,
}

struct FamilyRow {
    param: f64,
    laqc: f64,
    concurrence: f64,
    oracle: Option<(f64, f64)>,
}

pub fn family_sweep(cfg: &Config) -> CliResult<SweepOutput> {
    let tag = cfg.require_family()?;
    let params = cfg.family_grid()?.points();
    let every = cfg.oracle_every.unwrap_or(10);

    let rows: Vec<CliResult<FamilyRow>> = params
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let f = FamilyId::new(tag, p)?;
            let oracle = if every > 0 && i % every == 0 {
                let rho = make_family(f).density_matrix();
                Some((laqc_oracle(&rho, OracleMode::Constructive)?.value, concurrence(&rho)?))
            } else {
                None
            };
            Ok(FamilyRow { param: p, laqc: laqc_family(f), concurrence: concurrence_family(f), oracle })
        })
        .collect();

    let mut table = Table::new(FAMILY_HEADER.to_vec());
    let (mut checked, mut mismatched) = (0usize, 0usize);
    for row in rows {
        let r = row?;
        let status = match r.oracle {
            Some((l, c)) => {
                checked += 1;
                if (l - r.laqc).abs() > SPOT_LAQC_TOL || (c - r.concurrence).abs() > SPOT_CONCURRENCE_TOL {
                    mismatched += 1;
                    "oracle_mismatch"
                } else {
                    "ok"
                }
            }
            None => "ok",
        };
        table.push(vec![
            tag.name().into(),
            r.param.into(),
            r.laqc.into(),
            r.concurrence.into(),
            Cell::opt(r.oracle.map(|o| o.0)),
            Cell::opt(r.oracle.map(|o| o.1)),
            status.into(),
        ]);
    }
    let summary = json!({ "rows": table.rows.len(), "oracle_checks": checked, "oracle_mismatches": mismatched });
    Ok(SweepOutput { table, summary })
}

/// `(p_ab, p_cd, xi)` points of a swap sweep in output order.
pub fn swap_points(cfg: &Config) -> CliResult<Vec<(f64, f64, f64)>> {
    let grid = cfg.family_grid()?.points();
    let xi = cfg.xi_spec()?;
    let slice = cfg.slice.unwrap_or(match xi {
        XiSpec::Fixed(_) => Slice::FixedXi,
        XiSpec::Grid(_) => Slice::EqualParams,
    });
    let mut pts = Vec::new();
    match slice {
        Slice::FixedXi => {
            let XiSpec::Fixed(x) = xi else {
                return Err("the fixed-xi slice takes a single --xi angle".into());
            };
            let second = match cfg.grid2 {
                Some(g) => {
                    Config { grid: Some(g), ..Default::default() }.family_grid()?;
                    g.points()
                }
                None => grid.clone(),
            };
            for &a in &grid {
                for &c in &second {
                    pts.push((a, c, x));
                }
            }
        }
        Slice::EqualParams => {
            if cfg.grid2.is_some() {
                return Err("--grid2 does not apply to the equal-params slice".into());
            }
            for &p in &grid {
                for &x in &xi.points() {
                    pts.push((p, p, x));
                }
            }
        }
    }
    Ok(pts)
}

pub fn swap_sweep(cfg: &Config) -> CliResult<SweepOutput> {
    let tag = cfg.require_family()?;
    let points = swap_points(cfg)?;
    let rows: Vec<CliResult<Vec<Cell>>> = points.par_iter().map(|&(a, c, x)| swap_row(tag, a, c, x)).collect();

    let mut table = Table::new(SWAP_HEADER.to_vec());
    let mut zero = 0usize;
    for row in rows {
        let row = row?;
        if row.last() == Some(&Cell::Text("zero_probability".into())) {
            zero += 1;
        }
        table.push(row);
    }
    let summary = json!({ "rows": table.rows.len(), "zero_probability_rows": zero });
    Ok(SweepOutput { table, summary })
}

fn swap_row(tag: FamilyTag, pa: f64, pc: f64, xi: f64) -> CliResult<Vec<Cell>> {
    let (fa, fc) = (FamilyId::new(tag, pa)?, FamilyId::new(tag, pc)?);
    let m = MeasurementState::new(xi)?;
    let lead = vec![tag.name().into(), pa.into(), pc.into(), xi.into()];
    match swap_family(fa, fc, m) {
        Ok(r) => {
            let b = r.outcome.normalized;
            let mut row = lead;
            row.extend([b.x3, b.y3, b.t1, b.t2, b.t3, r.outcome.norm, r.outcome.prob, r.laqc.laqc, r.concurrence].map(Cell::Num));
            row.push("ok".into());
            Ok(row)
        }
        Err(Error::ZeroProbability { .. }) => {
            let (_, norm) = swap_raw(&make_family(fa).bloch(), &make_family(fc).bloch(), m);
            let mut row = lead;
            row.extend(std::iter::repeat_n(Cell::Empty, 5));
            row.extend([Cell::Num(norm), Cell::Num(norm / laqc_core::swap::probability_scale())]);
            row.extend([Cell::Empty, Cell::Empty, "zero_probability".into()]);
            Ok(row)
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_grid, parse_xi};

    fn cfg(family: FamilyTag, grid: &str) -> Config {
        Config { family: Some(family), grid: Some(parse_grid(grid).unwrap()), ..Default::default() }
    }

    #[test]
    fn werner_endpoint_row() {
        let out = family_sweep(&cfg(FamilyTag::Werner, "0:1:101")).unwrap();
        let last = out.table.rows.last().unwrap();
        assert_eq!(last[2], Cell::Num(1.0));
        assert_eq!(last[3], Cell::Num(1.0));
        assert_eq!(out.summary["oracle_mismatches"], 0);
    }

    #[test]
    fn slices() {
        let mut c = cfg(FamilyTag::Beta, "0:1:3");
        assert_eq!(swap_points(&c).unwrap().len(), 9);
        c.xi = Some(parse_xi("0:0.5pi:4").unwrap());
        let pts = swap_points(&c).unwrap();
        assert_eq!(pts.len(), 12);
        assert!(pts.iter().all(|(a, b, _)| a == b));
        c.slice = Some(Slice::FixedXi);
        assert!(swap_points(&c).is_err());
    }

    #[test]
    fn swap_rows_are_rectangular() {
        let out = swap_sweep(&Config { xi: Some(parse_xi("0").unwrap()), ..cfg(FamilyTag::Vv, "0:1:3") }).unwrap();
        assert_eq!(out.table.rows.len(), 9);
        assert!(out.table.rows.iter().all(|r| r.len() == SWAP_HEADER.len()));
        assert_eq!(out.summary["zero_probability_rows"], 0);
    }
}
