//! Run configuration: grids, angles and output settings, parsed from flags
//! or loaded from a JSON file with the same schema as the run manifest.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use laqc_core::FamilyTag;
use serde::{Deserialize, Serialize};

use crate::CliResult;

/// Evenly spaced points `start..=stop`, `count >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, String> {
        if count < 2 {
            return Err(format!("grid needs at least 2 points, got {count}"));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        Ok(Self { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.stop } else { self.start + (self.stop - self.start) * i as f64 / last })
            .collect()
    }

    fn check_within(&self, lo: f64, hi: f64, what: &str) -> Result<(), String> {
        for v in [self.start, self.stop] {
            if v < lo - 1e-12 || v > hi + 1e-12 {
                return Err(format!("{what} grid value {v} outside [{lo}, {hi}]"));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// Parses `start:stop:count`; bounds accept the angle syntax of [`parse_angle`].
pub fn parse_grid(s: &str) -> Result<Grid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(format!("expected start:stop:count, got '{s}'"));
    };
    let count = n.trim().parse::<usize>().map_err(|e| format!("bad count '{n}': {e}"))?;
    Grid::new(parse_angle(a)?, parse_angle(b)?, count)
}

/// Plain radians (`1.5708`) or multiples of pi (`0.5pi`, `-pi`, `pi/2`).
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let bad = |e: &dyn fmt::Display| format!("bad number '{s}': {e}");
    if let Some(i) = t.find("pi") {
        let (coef, rest) = (&t[..i], &t[i + 2..]);
        let k = match coef {
            "" | "+" => 1.0,
            "-" => -1.0,
            c => c.trim_end_matches('*').parse::<f64>().map_err(|e| bad(&e))?,
        };
        let div = match rest {
            "" => 1.0,
            r => r.strip_prefix('/').ok_or_else(|| format!("bad angle '{s}'"))?.parse::<f64>().map_err(|e| bad(&e))?,
        };
        return Ok(k * PI / div);
    }
    t.parse::<f64>().map_err(|e| bad(&e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XiSpec {
    Fixed(f64),
    Grid(Grid),
}

impl XiSpec {
    pub fn points(&self) -> Vec<f64> {
        match self {
            XiSpec::Fixed(x) => vec![*x],
            XiSpec::Grid(g) => g.points(),
        }
    }
}

pub fn parse_xi(s: &str) -> Result<XiSpec, String> {
    if s.contains(':') {
        parse_grid(s).map(XiSpec::Grid)
    } else {
        parse_angle(s).map(XiSpec::Fixed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Slice {
    /// Fixed measurement angle over (p_AB, p_CD).
    FixedXi,
    /// p_AB = p_CD = p over (p, xi).
    EqualParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}'")),
        }
    }
}

/// Every setting a command can take. Absent fields fall back to the file
/// config and then to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Config {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyTag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid2: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<XiSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slice: Option<Slice>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_every: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<usize>,
}

impl Config {
    /// Field-wise `self` first, then `fallback`.
    pub fn or(self, fallback: Config) -> Config {
        Config {
            family: self.family.or(fallback.family),
            grid: self.grid.or(fallback.grid),
            grid2: self.grid2.or(fallback.grid2),
            xi: self.xi.or(fallback.xi),
            slice: self.slice.or(fallback.slice),
            out: self.out.or(fallback.out),
            format: self.format.or(fallback.format),
            seed: self.seed.or(fallback.seed),
            tol: self.tol.or(fallback.tol),
            samples: self.samples.or(fallback.samples),
            oracle_every: self.oracle_every.or(fallback.oracle_every),
            density: self.density.or(fallback.density),
        }
    }

    /// Loads a config file. A run manifest is accepted too; its `config`
    /// object is used.
    pub fn load(path: &Path) -> CliResult<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut value: serde_json::Value = serde_json::from_str(&text)?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        Ok(serde_json::from_value(value)?)
    }

    /// Output format: explicit setting, else from the file extension.
    pub fn resolved_format(&self) -> Format {
        self.format.unwrap_or_else(|| match self.out.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        })
    }

    pub fn require_family(&self) -> CliResult<FamilyTag> {
        Ok(self.family.ok_or("--family is required")?)
    }

    pub fn family_grid(&self) -> CliResult<Grid> {
        let g = self.grid.unwrap_or(Grid { start: 0.0, stop: 1.0, count: 101 });
        g.check_within(0.0, 1.0, "family parameter")?;
        Ok(g)
    }

    pub fn xi_spec(&self) -> CliResult<XiSpec> {
        let xi = self.xi.unwrap_or(XiSpec::Fixed(FRAC_PI_2));
        match xi {
            XiSpec::Fixed(x) if x.abs() > FRAC_PI_2 + 1e-12 => Err(format!("xi = {x} outside [-pi/2, pi/2]").into()),
            XiSpec::Grid(g) => {
                g.check_within(-FRAC_PI_2, FRAC_PI_2, "xi")?;
                Ok(xi)
            }
            _ => Ok(xi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("-pi").unwrap(), -PI);
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("1.25").unwrap(), 1.25);
        assert!(parse_angle("pie").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:1:11").unwrap();
        let p = g.points();
        assert_eq!((p.len(), p[0], p[10]), (11, 0.0, 1.0));
        assert!((p[3] - 0.3).abs() < 1e-16);
        assert_eq!(parse_grid("-0.5pi:0.5pi:3").unwrap().points()[1], 0.0);
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn xi_forms() {
        assert_eq!(parse_xi("0.5pi").unwrap(), XiSpec::Fixed(FRAC_PI_2));
        assert!(matches!(parse_xi("0:0.5pi:5").unwrap(), XiSpec::Grid(_)));
    }

    #[test]
    fn flags_override_file() {
        let flags = Config { seed: Some(1), ..Default::default() };
        let file = Config { seed: Some(2), samples: Some(5), ..Default::default() };
        let c = flags.or(file);
        assert_eq!((c.seed, c.samples), (Some(1), Some(5)));
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = Config {
            family: Some(FamilyTag::Beta),
            grid: Some(Grid::new(0.0, 1.0, 5).unwrap()),
            xi: Some(XiSpec::Grid(Grid::new(-1.0, 1.0, 3).unwrap())),
            slice: Some(Slice::EqualParams),
            ..Default::default()
        };
        let back: Config = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn out_of_domain_grids_are_rejected() {
        let c = Config { grid: Some(Grid::new(0.0, 1.5, 3).unwrap()), ..Default::default() };
        assert!(c.family_grid().is_err());
        let c = Config { xi: Some(XiSpec::Fixed(2.0)), ..Default::default() };
        assert!(c.xi_spec().is_err());
    }
}
