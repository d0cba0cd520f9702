//! Audit of the published closed-form expressions for swapped family states
//! against the explicit 16x16 pipeline.
//!
//! Each printed expression is evaluated on a parameter grid next to the
//! corresponding pipeline value and summarized as a deviation profile.
//! Expressions within [`CONFIRM_TOL`] everywhere are CONFIRMED; all others are
//! DISCREPANT and carry their profile.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::correlations::{axis_information, concurrence, laqc_family, laqc_xstate, g3_mutual_information};
use crate::error::{Error, Result};
use crate::swap::{bloch_of, probability_scale, swap_oracle, swap_oracle_xgate_variant, MeasurementState, CLOSURE_TOL};
use crate::xstate::{gamma_cap, make_family, BlochX, FamilyId, FamilyTag, XState};

pub const CONFIRM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AuditGrid {
    /// Points per family parameter on `[0, 1]`.
    pub params: usize,
    /// Points of `xi` on `[-pi/2, pi/2]`.
    pub xi: usize,
    /// Points for single-state expressions.
    pub single: usize,
}

impl Default for AuditGrid {
    fn default() -> Self {
        Self { params: 11, xi: 11, single: 101 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Confirmed,
    Discrepant,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Confirmed => "CONFIRMED",
            Classification::Discrepant => "DISCREPANT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationProfile {
    /// Grid points where both values are defined.
    pub points: usize,
    /// Points where the pipeline has a vanishing outcome probability.
    pub skipped: usize,
    /// Points where the printed expression is undefined (division by zero,
    /// logarithm of a negative number) but the pipeline is not.
    pub undefined: usize,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// `(p_AB, p_CD, xi)` at the largest deviation.
    pub argmax: [f64; 3],
    /// Share of points deviating by more than the confirmation tolerance.
    pub fraction_above_tol: f64,
    /// Least-squares `k` in `pipeline ≈ k · printed`, when defined.
    pub fit_factor: Option<f64>,
    /// Largest `|pipeline - k · printed|`.
    pub fit_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditEntry {
    pub id: &'static str,
    pub family: Option<FamilyTag>,
    pub grid_points: usize,
    pub profile: DeviationProfile,
    pub classification: Classification,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub grid: AuditGrid,
    pub probability_scale: f64,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn entry(&self, id: &str) -> Option<&AuditEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

#[derive(Default)]
struct Accumulator {
    points: usize,
    skipped: usize,
    undefined: usize,
    max_abs: f64,
    sum_abs: f64,
    argmax: [f64; 3],
    above: usize,
    op: f64,
    pp: f64,
    pairs: Vec<(f64, f64)>,
}

impl Accumulator {
    fn add(&mut self, at: [f64; 3], printed: &[f64], pipeline: &[f64]) {
        if printed.iter().any(|v| !v.is_finite()) {
            self.undefined += 1;
            return;
        }
        let dev = printed.iter().zip(pipeline).map(|(p, o)| (p - o).abs()).fold(0.0, f64::max);
        self.points += 1;
        self.sum_abs += dev;
        if dev > CONFIRM_TOL {
            self.above += 1;
        }
        if dev > self.max_abs || self.points == 1 {
            self.max_abs = dev;
            self.argmax = at;
        }
        for (&p, &o) in printed.iter().zip(pipeline) {
            self.op += o * p;
            self.pp += p * p;
            self.pairs.push((p, o));
        }
    }

    fn finish(self) -> DeviationProfile {
        let n = self.points.max(1) as f64;
        let fit_factor = (self.pp > 0.0).then(|| self.op / self.pp);
        let fit_residual = fit_factor.map(|k| self.pairs.iter().map(|(p, o)| (o - k * p).abs()).fold(0.0, f64::max));
        DeviationProfile {
            points: self.points,
            skipped: self.skipped,
            undefined: self.undefined,
            max_abs: self.max_abs,
            mean_abs: self.sum_abs / n,
            argmax: self.argmax,
            fraction_above_tol: self.above as f64 / n,
            fit_factor,
            fit_residual,
        }
    }
}

fn entry(id: &'static str, family: Option<FamilyTag>, hint: &str, acc: Accumulator) -> AuditEntry {
    let profile = acc.finish();
    let grid_points = profile.points + profile.skipped + profile.undefined;
    let confirmed = profile.points > 0 && profile.undefined == 0 && profile.max_abs <= CONFIRM_TOL;
    let classification = if confirmed { Classification::Confirmed } else { Classification::Discrepant };
    let mut note = hint.to_string();
    if !confirmed {
        match (profile.fit_factor, profile.fit_residual) {
            (Some(k), Some(res)) if res <= CONFIRM_TOL && (k - 1.0).abs() > CONFIRM_TOL => {
                note.push_str(&format!(" Off by a constant factor {k:.12}."));
            }
            _ => note.push_str(" Not a constant factor."),
        }
        if profile.undefined > 0 {
            note.push_str(&format!(" Undefined at {} points.", profile.undefined));
        }
    }
    AuditEntry { id, family, grid_points, profile, classification, note }
}

/// `g` without clamping: undefined (NaN) outside `[-1, 1]`.
fn g_printed(t: f64) -> f64 {
    if t.abs() > 1.0 + 1e-12 || !t.is_finite() {
        f64::NAN
    } else {
        axis_information(t.clamp(-1.0, 1.0))
    }
}

/// Pipeline values at one grid point of a swapped family pair.
struct Point {
    at: [f64; 3],
    pa: f64,
    pc: f64,
    xi: f64,
    normalized: BlochX,
    norm: f64,
    laqc: f64,
    concurrence: f64,
    xgate_concurrence: Option<f64>,
}

fn grid(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    if count < 2 {
        return vec![lo];
    }
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

fn pipeline_point(tag: FamilyTag, pa: f64, pc: f64, xi: f64) -> Result<Point> {
    let rho_ab = make_family(FamilyId::new(tag, pa)?).density_matrix();
    let rho_cd = make_family(FamilyId::new(tag, pc)?).density_matrix();
    let m = MeasurementState::new(xi)?;
    let (out, prob) = swap_oracle(&rho_ab, &rho_cd, m)?;
    let state = XState::from_density(&out, CLOSURE_TOL)?;
    let xgate_concurrence = match swap_oracle_xgate_variant(&rho_ab, &rho_cd, m) {
        Ok((o, _)) => Some(concurrence(&o)?),
        Err(Error::ZeroProbability { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(Point {
        at: [pa, pc, xi],
        pa,
        pc,
        xi,
        normalized: bloch_of(&out)?,
        norm: probability_scale() * prob,
        laqc: laqc_xstate(&state).laqc,
        concurrence: concurrence(&out)?,
        xgate_concurrence,
    })
}

/// Evaluates the swap grid of one family. `Err` points other than a
/// vanishing probability abort the audit.
fn family_points(tag: FamilyTag, g: &AuditGrid) -> Result<(Vec<Point>, usize)> {
    let mut points = Vec::new();
    let mut skipped = 0;
    for &pa in &grid(g.params, 0.0, 1.0) {
        for &pc in &grid(g.params, 0.0, 1.0) {
            for &xi in &grid(g.xi, -FRAC_PI_2, FRAC_PI_2) {
                match pipeline_point(tag, pa, pc, xi) {
                    Ok(p) => points.push(p),
                    Err(Error::ZeroProbability { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok((points, skipped))
}

type Printed = fn(&Point) -> Option<(Vec<f64>, Vec<f64>)>;

fn family_bloch(tag: FamilyTag, p: f64) -> BlochX {
    make_family(FamilyId::new(tag, p).expect("grid inside [0, 1]")).bloch()
}

fn printed_raw_map(ab: &BlochX, cd: &BlochX, xi: f64) -> BlochX {
    let (s, co) = xi.sin_cos();
    BlochX {
        x3: (1.0 - cd.x3 * co) * ab.x3 + (co - cd.x3) * ab.t3,
        y3: (ab.y3 * cd.y3 - cd.t3) * co + (cd.y3 - ab.y3 * cd.t3),
        t1: ab.t1 * cd.t1 * s,
        t2: ab.t2 * cd.t2 * s,
        t3: (cd.y3 * co - cd.t3) * ab.t3 + (cd.y3 - cd.t3 * co) * ab.x3,
    }
}

fn printed_norm(ab: &BlochX, cd: &BlochX, xi: f64) -> f64 {
    1.0 + ab.y3 * cd.x3 + (ab.y3 + cd.x3) * xi.cos()
}

fn raw_pipeline(p: &Point) -> BlochX {
    p.normalized.scaled(p.norm)
}

fn general_rows(tag: FamilyTag) -> Vec<(&'static str, &'static str, Box<dyn Fn(&Point) -> Option<(Vec<f64>, Vec<f64>)>>)> {
    let raw = move |p: &Point| printed_raw_map(&family_bloch(tag, p.pa), &family_bloch(tag, p.pc), p.xi);
    vec![
        ("swap.raw.x3", "Printed local x3 of the general map.", Box::new(move |p| Some((vec![raw(p).x3], vec![raw_pipeline(p).x3])))),
        ("swap.raw.y3", "Printed local y3 of the general map.", Box::new(move |p| Some((vec![raw(p).y3], vec![raw_pipeline(p).y3])))),
        ("swap.raw.t1", "Printed T1 of the general map.", Box::new(move |p| Some((vec![raw(p).t1], vec![raw_pipeline(p).t1])))),
        (
            "swap.raw.t2",
            "Printed T2 of the general map; the pipeline carries an extra minus sign.",
            Box::new(move |p| Some((vec![raw(p).t2], vec![raw_pipeline(p).t2]))),
        ),
        ("swap.raw.t3", "Printed T3 of the general map.", Box::new(move |p| Some((vec![raw(p).t3], vec![raw_pipeline(p).t3])))),
        (
            "swap.norm",
            "Normalization factor against the measured outcome probability times the fixed scale.",
            Box::new(move |p| {
                let n = printed_norm(&family_bloch(tag, p.pa), &family_bloch(tag, p.pc), p.xi);
                Some((vec![n], vec![p.norm]))
            }),
        ),
    ]
}

fn bloch_vec(b: &BlochX) -> Vec<f64> {
    b.as_array().to_vec()
}

fn family_rows(tag: FamilyTag) -> Vec<(&'static str, &'static str, Printed)> {
    match tag {
        FamilyTag::Werner => vec![
            ("werner.swap.bloch", "Normalized post-swap Bloch list.", |p| {
                let (s, co) = p.xi.sin_cos();
                let zz = p.pa * p.pc;
                let b = BlochX::new(-p.pa * co, -p.pc * co, zz * s, -zz * s, zz);
                Some((bloch_vec(&b), bloch_vec(&p.normalized)))
            }),
            ("werner.swap.laqc", "Post-swap LAQC g(z_AB z_CD sin xi).", |p| {
                Some((vec![g_printed(p.pa * p.pc * p.xi.sin())], vec![p.laqc]))
            }),
            ("werner.swap.concurrence", "Post-swap concurrence.", |p| {
                let s = p.xi.sin();
                let root = ((1.0 - p.pa * p.pa) * (1.0 - p.pc * p.pc) + (p.pa - p.pc).powi(2) * s * s).sqrt();
                Some((vec![(p.pa * p.pc * s.abs() - 0.5 * root).max(0.0)], vec![p.concurrence]))
            }),
        ],
        FamilyTag::Alpha => vec![
            ("alpha.swap.bloch", "Normalized post-swap Bloch list.", |p| {
                let (s, co) = p.xi.sin_cos();
                let aa = p.pa * p.pc;
                let b = BlochX::new((1.0 - 2.0 * p.pa) * co, (1.0 - 2.0 * p.pc) * co, aa * s, aa * s, (1.0 - 2.0 * p.pa) * (1.0 - 2.0 * p.pc));
                Some((bloch_vec(&b), bloch_vec(&p.normalized)))
            }),
            ("alpha.swap.laqc", "Post-swap LAQC g(alpha_AB alpha_CD sin xi).", |p| {
                Some((vec![g_printed(p.pa * p.pc * p.xi.sin())], vec![p.laqc]))
            }),
            ("alpha.swap.concurrence", "Claim: post-swap state separable.", |p| Some((vec![0.0], vec![p.concurrence]))),
            ("alpha.swap.concurrence_xgate", "Claim: separable with the bit-flipped measurement state too.", |p| {
                p.xgate_concurrence.map(|c| (vec![0.0], vec![c]))
            }),
        ],
        FamilyTag::Beta => vec![
            ("beta.swap.bloch", "Normalized post-swap Bloch list.", |p| {
                let (s, co) = p.xi.sin_cos();
                let (u, v) = (1.0 - 2.0 * p.pa, 1.0 - 2.0 * p.pc);
                let b = BlochX::new(u * co, v * co, s, -u * v * s, u * v);
                Some((bloch_vec(&b), bloch_vec(&p.normalized)))
            }),
            ("beta.swap.laqc", "Post-swap LAQC as g of the printed T2.", |p| {
                let t2 = -(1.0 - 2.0 * p.pa) * (1.0 - 2.0 * p.pc) * p.xi.sin();
                Some((vec![g_printed(t2)], vec![p.laqc]))
            }),
            ("beta.swap.concurrence", "Post-swap concurrence; the printed exponent is read as 4 b_AB b_CD.", |p| {
                let s = p.xi.sin();
                let (a, c) = (p.pa, p.pc);
                let lead = s.abs() * ((2.0 * a - 1.0) * c + 1.0 - a).abs();
                let root = ((a - c).powi(2) * s * s + 4.0 * a * c * (1.0 - a) * (1.0 - c)).sqrt();
                Some((vec![(lead - root).max(0.0)], vec![p.concurrence]))
            }),
        ],
        FamilyTag::Vv => vec![
            ("vv.swap.bloch_raw", "Unnormalized post-swap Bloch list.", |p| {
                let (s, co) = p.xi.sin_cos();
                let (fa, fc) = (p.pa, p.pc);
                let ff = fa * fc;
                let b = BlochX::new(
                    (2.0 - (3.0 - fc) * fa - fc) * (1.0 + co) + ff,
                    (2.0 - (3.0 - fa) * fc - fa) * (1.0 + co) + ff,
                    ff * s,
                    -ff * s,
                    (2.0 - (3.0 - 4.0 * fc) * fa - 3.0 * fc) * (1.0 + co) + ff,
                );
                Some((bloch_vec(&b), bloch_vec(&raw_pipeline(p))))
            }),
            ("vv.swap.norm", "Normalization factor.", |p| Some((vec![vv_norm(p)], vec![p.norm]))),
            ("vv.swap.laqc", "Post-swap LAQC g(T1 / N).", |p| {
                Some((vec![g_printed(p.pa * p.pc * p.xi.sin() / vv_norm(p))], vec![p.laqc]))
            }),
            ("vv.swap.concurrence", "Post-swap concurrence.", |p| {
                let (s, co) = p.xi.sin_cos();
                let (fa, fc) = (p.pa, p.pc);
                let c1 = 0.25 * fa * fc * s.abs() - (1.0 - co) * (fa * fc * (1.0 - fa) * (1.0 - fc)).sqrt();
                Some((vec![c1.max(0.0) / vv_norm(p)], vec![p.concurrence]))
            }),
        ],
        FamilyTag::Mems => vec![
            ("mems.swap.bloch_raw", "Unnormalized post-swap Bloch list.", |p| {
                let (s, co) = p.xi.sin_cos();
                let (ga, gc) = (cap(p.pa), cap(p.pc));
                let half = 0.5 * p.pa * p.pc * s;
                let b = BlochX::new(
                    ((1.0 + 2.0 * gc) * ga - gc) * (1.0 + co) + 2.0 * (1.0 - 3.0 * ga) * gc,
                    ((1.0 + 2.0 * ga) * gc - ga) * (1.0 + co) - 2.0 * (1.0 - ga) * gc,
                    half,
                    half,
                    (gc - ga) * (1.0 + co) - 2.0 * (1.0 - 3.0 * ga) * gc,
                );
                Some((bloch_vec(&b), bloch_vec(&raw_pipeline(p))))
            }),
            ("mems.swap.norm", "Normalization factor.", |p| Some((vec![mems_norm(p)], vec![p.norm]))),
            ("mems.swap.laqc", "Post-swap LAQC g(T1 / N) with the printed T1 and N.", |p| {
                Some((vec![g_printed(0.5 * p.pa * p.pc * p.xi.sin() / mems_norm(p))], vec![p.laqc]))
            }),
            ("mems.swap.concurrence", "Claim: post-swap state separable.", |p| Some((vec![0.0], vec![p.concurrence]))),
        ],
    }
}

fn cap(gamma: f64) -> f64 {
    gamma_cap(gamma).expect("grid inside [0, 1]")
}

fn vv_norm(p: &Point) -> f64 {
    1.0 + (1.0 - p.pa) * (1.0 - p.pc) + (2.0 - (p.pa + p.pc)) * p.xi.cos()
}

fn mems_norm(p: &Point) -> f64 {
    let (ga, gc) = (cap(p.pa), cap(p.pc));
    (ga - gc) * (1.0 + p.xi.cos()) + 2.0 * (1.0 - ga) * gc
}

/// Single-state rows: the printed `max{g1, g2, g3}` rule per family, the
/// quarter prefactor of `g3`, and the printed MEMS `T1`.
fn single_state_rows(g: &AuditGrid) -> Vec<AuditEntry> {
    let params = grid(g.single, 0.0, 1.0);
    let mut out = Vec::new();
    for tag in FamilyTag::ALL {
        let mut acc = Accumulator::default();
        for &p in &params {
            let f = FamilyId::new(tag, p).expect("grid inside [0, 1]");
            acc.add([p, f64::NAN, f64::NAN], &[laqc_xstate(&make_family(f)).literal_max], &[laqc_family(f)]);
        }
        let id = match tag {
            FamilyTag::Werner => "werner.laqc_max_rule",
            FamilyTag::Alpha => "alpha.laqc_max_rule",
            FamilyTag::Beta => "beta.laqc_max_rule",
            FamilyTag::Vv => "vv.laqc_max_rule",
            FamilyTag::Mems => "mems.laqc_max_rule",
        };
        out.push(entry(id, Some(tag), "Unrestricted max{g1, g2, g3} against the family LAQC.", acc));
    }

    let mut acc = Accumulator::default();
    for tag in FamilyTag::ALL {
        for &p in &params {
            let x = make_family(FamilyId::new(tag, p).expect("grid inside [0, 1]"));
            acc.add([p, f64::NAN, f64::NAN], &[laqc_xstate(&x).g.g3_quarter], &[g3_mutual_information(&x)]);
        }
    }
    out.push(entry("xstate.g3_prefactor", None, "g3 with the quarter prefactor against the z-basis mutual information.", acc));

    let mut acc = Accumulator::default();
    for &p in &params {
        let x = make_family(FamilyId::new(FamilyTag::Mems, p).expect("grid inside [0, 1]"));
        acc.add([p, f64::NAN, f64::NAN], &[cap(p)], &[x.bloch().t1]);
    }
    out.push(entry("mems.bloch.t1", Some(FamilyTag::Mems), "Printed T1 = Gamma against the defining matrix.", acc));
    out
}

/// Runs every printed-formula check on the given grid.
pub fn audit_printed_formulas(g: &AuditGrid) -> Result<AuditReport> {
    let mut per_family = Vec::new();
    for tag in FamilyTag::ALL {
        per_family.push((tag, family_points(tag, g)?));
    }

    let mut entries = Vec::new();
    let general_ids: Vec<(&'static str, &'static str)> =
        general_rows(FamilyTag::Werner).into_iter().map(|(id, hint, _)| (id, hint)).collect();
    for (k, (id, hint)) in general_ids.into_iter().enumerate() {
        let mut acc = Accumulator::default();
        for (tag, (points, skipped)) in &per_family {
            let rows = general_rows(*tag);
            acc.skipped += skipped;
            for p in points {
                if let Some((pr, or)) = (rows[k].2)(p) {
                    acc.add(p.at, &pr, &or);
                }
            }
        }
        entries.push(entry(id, None, hint, acc));
    }

    for (tag, (points, skipped)) in &per_family {
        for (id, hint, f) in family_rows(*tag) {
            let mut acc = Accumulator { skipped: *skipped, ..Default::default() };
            for p in points {
                match f(p) {
                    Some((pr, or)) => acc.add(p.at, &pr, &or),
                    None => acc.skipped += 1,
                }
            }
            entries.push(entry(id, Some(*tag), hint, acc));
        }
    }
    entries.extend(single_state_rows(g));
    Ok(AuditReport { grid: *g, probability_scale: probability_scale(), entries })
}

/// Audit restricted to one family's swap expressions.
pub fn audit_family(tag: FamilyTag, g: &AuditGrid) -> Result<Vec<AuditEntry>> {
    let (points, skipped) = family_points(tag, g)?;
    Ok(family_rows(tag)
        .into_iter()
        .map(|(id, hint, f)| {
            let mut acc = Accumulator { skipped, ..Default::default() };
            for p in &points {
                match f(p) {
                    Some((pr, or)) => acc.add(p.at, &pr, &or),
                    None => acc.skipped += 1,
                }
            }
            entry(id, Some(tag), hint, acc)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> AuditGrid {
        AuditGrid { params: 5, xi: 5, single: 21 }
    }

    #[test]
    fn werner_and_alpha_laqc_are_confirmed() {
        for tag in [FamilyTag::Werner, FamilyTag::Alpha] {
            let rows = audit_family(tag, &small()).unwrap();
            let laqc = rows.iter().find(|e| e.id.ends_with("swap.laqc")).unwrap();
            assert_eq!(laqc.classification, Classification::Confirmed, "{laqc:?}");
        }
    }

    #[test]
    fn mems_norm_is_off_by_two() {
        let rows = audit_family(FamilyTag::Mems, &small()).unwrap();
        let n = rows.iter().find(|e| e.id == "mems.swap.norm").unwrap();
        assert_eq!(n.classification, Classification::Discrepant);
        assert!((n.profile.fit_factor.unwrap() - 2.0).abs() < 1e-9, "{n:?}");
        assert!(n.profile.fit_residual.unwrap() < 1e-9);
    }

    #[test]
    fn quarter_prefactor_is_a_constant_factor() {
        let rows = single_state_rows(&small());
        let g3 = rows.iter().find(|e| e.id == "xstate.g3_prefactor").unwrap();
        assert_eq!(g3.classification, Classification::Discrepant);
        assert!((g3.profile.fit_factor.unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn literal_max_rule_fails_on_beta() {
        let rows = single_state_rows(&small());
        let b = rows.iter().find(|e| e.id == "beta.laqc_max_rule").unwrap();
        assert_eq!(b.classification, Classification::Discrepant);
        assert!(b.profile.max_abs > 0.5);
    }

    #[test]
    fn undefined_printed_values_are_counted() {
        let mut acc = Accumulator::default();
        acc.add([0.0; 3], &[f64::NAN], &[0.0]);
        acc.add([0.0; 3], &[0.0], &[0.0]);
        let e = entry("t", None, "", acc);
        assert_eq!(e.profile.undefined, 1);
        assert_eq!(e.classification, Classification::Discrepant);
    }
}
