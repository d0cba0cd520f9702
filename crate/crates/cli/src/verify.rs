//! Verification suites: golden family values and the cross-checks between
//! closed forms and numerical oracles, on seeded random states.
//!
//! The report holds no timings or timestamps, so equal seeds give
//! byte-identical output.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use laqc_core::correlations::{axis_information, concurrence, concurrence_family, laqc_family, laqc_oracle, laqc_xstate, OracleMode};
use laqc_core::qmat::{local_unitary, validate_density};
use laqc_core::sampling::{random_unitary, random_xstate};
use laqc_core::swap::{bloch_of, swap_bloch, swap_family, swap_oracle, MeasurementState};
use laqc_core::{make_family, FamilyId, FamilyTag, XState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliResult;

pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
/// Random states used for the (slower) local-unitary suite.
pub const UNITARY_SAMPLES: usize = 20;
pub const SWAP_ANGLES: [f64; 5] = [-FRAC_PI_2, -FRAC_PI_4, 0.0, FRAC_PI_4, FRAC_PI_2];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub case: Value,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub passed: bool,
    pub first_failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub samples: usize,
    pub tol_override: Option<f64>,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<(&'static str, &Failure)> {
        self.suites.iter().find_map(|s| s.first_failure.as_ref().map(|f| (s.name, f)))
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Residuals of one suite, in case order.
struct Cases(Vec<(Value, f64)>);

impl Cases {
    fn finish(self, name: &'static str, tolerance: f64) -> SuiteResult {
        let max_residual = self.0.iter().map(|c| c.1).fold(0.0, f64::max);
        let first_failure = self
            .0
            .iter()
            .find(|(_, r)| !(*r <= tolerance))
            .map(|(case, residual)| Failure { case: case.clone(), residual: *residual });
        SuiteResult { name, cases: self.0.len(), tolerance, max_residual, passed: first_failure.is_none(), first_failure }
    }
}

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn fam(tag: FamilyTag, p: f64) -> FamilyId {
    FamilyId::new(tag, p).expect("grid inside [0, 1]")
}

/// Random states for suite `stream`, reproducible from the seed alone.
fn states(seed: u64, stream: u64, n: usize) -> Vec<XState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..n).map(|_| random_xstate(&mut rng)).collect()
}

fn state_json(x: &XState) -> Value {
    json!([x.a(), x.b(), x.c(), x.d(), x.r(), x.s()])
}

fn family_goldens() -> Cases {
    let mut out = Vec::new();
    let w1 = make_family(fam(FamilyTag::Werner, 1.0));
    out.push((json!({"check": "werner laqc", "z": 1.0}), (laqc_xstate(&w1).laqc - 1.0).abs()));
    out.push((json!({"check": "werner concurrence", "z": 1.0}), (concurrence(&w1.density_matrix()).unwrap() - 1.0).abs()));
    for z in grid(101).into_iter().filter(|z| *z <= 1.0 / 3.0) {
        let c = concurrence(&make_family(fam(FamilyTag::Werner, z)).density_matrix()).unwrap();
        out.push((json!({"check": "werner separable", "z": z}), c.abs()));
    }
    for (tag, name) in [(FamilyTag::Vv, "vv concurrence"), (FamilyTag::Mems, "mems concurrence")] {
        for p in grid(101) {
            let c = concurrence(&make_family(fam(tag, p)).density_matrix()).unwrap();
            out.push((json!({"check": name, "param": p}), (c - p).abs()));
        }
    }
    Cases(out)
}

fn alpha_crossing() -> Cases {
    let h = |a: f64| laqc_family(fam(FamilyTag::Alpha, a)) - concurrence_family(fam(FamilyTag::Alpha, a));
    let (mut lo, mut hi) = (0.5 + 1e-9, 1.0 - 1e-9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    Cases(vec![(json!({"root": root, "target": 0.6872}), (root - 0.6872).abs())])
}

fn closed_vs_family() -> Cases {
    let mut out = Vec::new();
    for tag in FamilyTag::ALL {
        for p in grid(101) {
            let f = fam(tag, p);
            let r = (laqc_xstate(&make_family(f)).laqc - laqc_family(f)).abs();
            out.push((json!({"family": tag.name(), "param": p}), r));
        }
    }
    Cases(out)
}

fn family_concurrence() -> Cases {
    let mut out = Vec::new();
    for tag in FamilyTag::ALL {
        for p in grid(101) {
            let f = fam(tag, p);
            let r = (concurrence(&make_family(f).density_matrix()).unwrap() - concurrence_family(f)).abs();
            out.push((json!({"family": tag.name(), "param": p}), r));
        }
    }
    Cases(out)
}

fn g_parity() -> Cases {
    let mut out = vec![
        (json!({"t": 0.0}), axis_information(0.0).abs()),
        (json!({"t": 1.0}), (axis_information(1.0) - 1.0).abs()),
        (json!({"t": -1.0}), (axis_information(-1.0) - 1.0).abs()),
    ];
    for t in grid(101) {
        out.push((json!({"t": t, "check": "even"}), (axis_information(t) - axis_information(-t)).abs()));
    }
    Cases(out)
}

fn bloch_round_trip(xs: &[XState]) -> Cases {
    Cases(
        xs.iter()
            .map(|x| {
                let back = x.bloch().to_xstate().map(|y| y.bloch().max_abs_diff(&x.bloch())).unwrap_or(f64::INFINITY);
                let fano = bloch_of(&x.density_matrix()).map(|b| b.max_abs_diff(&x.bloch())).unwrap_or(f64::INFINITY);
                (state_json(x), back.max(fano))
            })
            .collect(),
    )
}

struct SwapCheck {
    case: Value,
    bloch: f64,
    ratio: f64,
    closure: f64,
    validity: f64,
}

fn swap_checks(pairs: &[(XState, XState)]) -> Vec<SwapCheck> {
    let jobs: Vec<(usize, f64)> = (0..pairs.len()).flat_map(|i| SWAP_ANGLES.map(|x| (i, x))).collect();
    jobs.par_iter()
        .map(|&(i, xi)| {
            let (ab, cd) = &pairs[i];
            let case = json!({"ab": state_json(ab), "cd": state_json(cd), "xi": xi});
            let m = MeasurementState::new(xi).expect("angles in range");
            match (swap_oracle(&ab.density_matrix(), &cd.density_matrix(), m), swap_bloch(&ab.bloch(), &cd.bloch(), m)) {
                (Ok((out, prob)), Ok(closed)) => {
                    let validity = closed
                        .normalized
                        .to_xstate()
                        .map(|s| {
                            let r = validate_density(&s.density_matrix(), 0.0);
                            r.hermiticity_residual.max(r.trace_deviation).max(-r.min_eigenvalue)
                        })
                        .unwrap_or(f64::INFINITY);
                    SwapCheck {
                        case,
                        bloch: closed.normalized.max_abs_diff(&bloch_of(&out).expect("4x4")),
                        ratio: closed.norm / prob,
                        closure: out.off_x_pattern(),
                        validity,
                    }
                }
                _ => SwapCheck { case, bloch: f64::INFINITY, ratio: f64::NAN, closure: f64::INFINITY, validity: f64::INFINITY },
            }
        })
        .collect()
}

fn oracle_vs_closed(xs: &[XState]) -> Cases {
    Cases(
        xs.par_iter()
            .map(|x| {
                let r = laqc_oracle(&x.density_matrix(), OracleMode::Constructive)
                    .map(|o| (o.value - laqc_xstate(x).laqc).abs())
                    .unwrap_or(f64::INFINITY);
                (state_json(x), r)
            })
            .collect(),
    )
}

fn local_unitary_invariance(xs: &[XState], seed: u64) -> Cases {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(99);
    let us: Vec<_> = xs.iter().map(|_| local_unitary(&random_unitary(&mut rng), &random_unitary(&mut rng))).collect();
    Cases(
        xs.par_iter()
            .zip(us.par_iter())
            .map(|(x, u)| {
                let rho = x.density_matrix();
                let rotated = rho.conjugate_by(u).expect("4x4");
                let dc = (concurrence(&rho).unwrap() - concurrence(&rotated).unwrap()).abs();
                let l0 = laqc_oracle(&rho, OracleMode::Constructive).map(|o| o.value);
                let l1 = laqc_oracle(&rotated, OracleMode::Constructive).map(|o| o.value);
                let dl = match (l0, l1) {
                    (Ok(a), Ok(b)) => (a - b).abs(),
                    _ => f64::INFINITY,
                };
                (state_json(x), dc.max(dl))
            })
            .collect(),
    )
}

fn werner_monotone() -> Cases {
    let m = MeasurementState::new(FRAC_PI_2).expect("in range");
    let mut pts: Vec<(f64, f64)> = Vec::new();
    for a in grid(21) {
        for c in grid(21) {
            let r = swap_family(fam(FamilyTag::Werner, a), fam(FamilyTag::Werner, c), m).expect("nonzero probability");
            pts.push((a * c, r.laqc.laqc));
        }
    }
    pts.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Cases(
        pts.windows(2)
            .filter(|w| w[1].0 > w[0].0 + 1e-12)
            .map(|w| (json!({"product": w[1].0}), if w[1].1 > w[0].1 { 0.0 } else { w[0].1 - w[1].1 + f64::EPSILON }))
            .collect(),
    )
}

/// Runs every suite. `tol`, when given, replaces each suite's own tolerance.
pub fn run(samples: usize, seed: u64, tol: Option<f64>) -> VerifyReport {
    let t = |own: f64| tol.unwrap_or(own);
    let mut suites = vec![
        family_goldens().finish("family_golden_values", t(1e-12)),
        alpha_crossing().finish("alpha_crossing", t(5e-4)),
        closed_vs_family().finish("closed_form_vs_family_laqc", t(1e-10)),
        family_concurrence().finish("family_concurrence_vs_wootters", t(1e-12)),
        g_parity().finish("g_parity_and_endpoints", t(1e-15)),
        werner_monotone().finish("werner_swap_monotone", t(0.0)),
    ];

    let xs = states(seed, 1, samples);
    suites.push(bloch_round_trip(&xs).finish("bloch_round_trip", t(1e-14)));

    let ab = states(seed, 2, samples);
    let cd = states(seed, 3, samples);
    let pairs: Vec<_> = ab.into_iter().zip(cd).collect();
    let checks = swap_checks(&pairs);
    let collect = |f: fn(&SwapCheck) -> f64| Cases(checks.iter().map(|c| (c.case.clone(), f(c))).collect());
    suites.push(collect(|c| c.bloch).finish("swap_oracle_equivalence", t(1e-10)));
    suites.push(collect(|c| c.closure).finish("swap_x_form_closure", t(1e-12)));
    suites.push(collect(|c| c.validity).finish("swap_output_validity", t(1e-10)));
    let ratios: Vec<f64> = checks.iter().map(|c| c.ratio).collect();
    let scale_cases = match ratios.first() {
        Some(&r0) => Cases(
            checks
                .iter()
                .map(|c| (c.case.clone(), if c.ratio.is_finite() { (c.ratio - r0).abs() } else { f64::INFINITY }))
                .collect(),
        ),
        None => Cases(Vec::new()),
    };
    suites.push(scale_cases.finish("probability_scale_constant", t(1e-12)));

    suites.push(oracle_vs_closed(&states(seed, 4, samples)).finish("constructive_oracle_vs_closed_form", t(1e-4)));
    let lu = states(seed, 5, samples.min(UNITARY_SAMPLES));
    suites.push(local_unitary_invariance(&lu, seed).finish("local_unitary_invariance", t(1e-6)));

    let passed = suites.iter().all(|s| s.passed);
    VerifyReport { seed, samples, tol_override: tol, passed, suites }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let r = run(5, 1, None);
        assert!(r.passed, "{:?}", r.first_failure());
    }

    #[test]
    fn zero_samples_still_checks_goldens() {
        let r = run(0, 42, None);
        assert!(r.passed);
        let golden = r.suites.iter().find(|s| s.name == "family_golden_values").unwrap();
        assert!(golden.cases > 200);
    }

    #[test]
    fn impossible_tolerance_fails_with_residuals() {
        let r = run(3, 42, Some(1e-16));
        assert!(!r.passed);
        let (_, f) = r.first_failure().unwrap();
        assert!(f.residual > 1e-16);
    }
}
