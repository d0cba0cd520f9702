//! Correlation quantifiers: mutual information of classical states, the
//! two-stage local-available quantum correlation (LAQC) search, its
//! closed form for X states, and the Wootters concurrence.
//!
//! LAQC is built in two stages. First an optimal computational product basis
//! is chosen from its classical correlations. The state is then read in a
//! basis mutually unbiased to it, with the two relative phases chosen to
//! maximize the mutual information of the readout.
//!
//! For X states the classical correlations along the three Pauli axes are
//! `g(T1)`, `g(T2)` and the z-basis mutual information. The optimal
//! computational axis is the one carrying the most classical correlation, and
//! the complementary plane then reaches the larger of the remaining two. So
//! the closed form is the second largest of the three values.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::optimize::{grid_then_refine, GridAxis, NelderMeadOptions};
use crate::qmat::{self, c, DensityMatrix};
use crate::xstate::{FamilyId, FamilyTag, XState};

/// Slack on `|T| <= 1` absorbed before taking logarithms.
const CLAMP_TOL: f64 = 1e-12;

/// Grid sizes and refinement settings of the numerical oracles. Fixed so that
/// results are reproducible bit for bit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OracleConfig {
    pub theta_points: usize,
    pub phi_points: usize,
    pub phase_points: usize,
    pub seeds: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { theta_points: 17, phi_points: 9, phase_points: 64, seeds: 4 }
    }
}

/// Polar and azimuthal angles of the two local computational bases.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct LocalBasisAngles {
    pub theta_a: f64,
    pub theta_b: f64,
    pub phi_a: f64,
    pub phi_b: f64,
}

impl LocalBasisAngles {
    pub fn new(theta_a: f64, theta_b: f64, phi_a: f64, phi_b: f64) -> Self {
        Self { theta_a, theta_b, phi_a, phi_b }
    }

    /// Angles whose first basis vectors point along the given Bloch directions.
    pub fn from_directions(na: &Vector3<f64>, nb: &Vector3<f64>) -> Self {
        let (theta_a, phi_a) = direction_angles(na);
        let (theta_b, phi_b) = direction_angles(nb);
        Self { theta_a, theta_b, phi_a, phi_b }
    }
}

fn direction_angles(n: &Vector3<f64>) -> (f64, f64) {
    let n = n.normalize();
    let theta = n.z.clamp(-1.0, 1.0).acos();
    let phi = n.y.atan2(n.x).rem_euclid(2.0 * PI);
    (theta, phi)
}

/// Relative phases of the complementary (mutually unbiased) bases.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ComplementaryPhases {
    pub phase_a: f64,
    pub phase_b: f64,
}

/// Joint outcome distribution of a product-basis readout, indexed
/// `2 i_A + j_B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDistribution {
    probs: [f64; 4],
}

impl JointDistribution {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || probs.iter().any(|p| *p < -1e-12 || !p.is_finite()) {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { probs: probs.map(|p| p.max(0.0)) })
    }

    // Readouts of a valid state: tiny negative round-off is clipped.
    fn from_readout(probs: [f64; 4]) -> Self {
        Self { probs: probs.map(|p| p.max(0.0)) }
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    pub fn marginal_a(&self) -> [f64; 2] {
        [self.probs[0] + self.probs[1], self.probs[2] + self.probs[3]]
    }

    pub fn marginal_b(&self) -> [f64; 2] {
        [self.probs[0] + self.probs[2], self.probs[1] + self.probs[3]]
    }
}

/// `sum R_ij log2(R_ij / (R_i R_j))` in bits, with `0 log 0 = 0`.
pub fn mutual_information(r: &JointDistribution) -> f64 {
    let (ma, mb) = (r.marginal_a(), r.marginal_b());
    let mut total = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let p = r.probs[2 * i + j];
            if p > 0.0 {
                total += p * (p / (ma[i] * mb[j])).log2();
            }
        }
    }
    total.max(0.0)
}

type Basis = [[Complex64; 2]; 2];

/// Basis `{U|0>, U|1>}` with `U = [[cos t/2, sin t/2], [sin t/2 e^{ip}, -cos t/2 e^{ip}]]`.
fn local_basis(theta: f64, phi: f64) -> Basis {
    let (s, co) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [[c(co), e * s], [c(s), -e * co]]
}

/// Basis mutually unbiased to `local_basis(theta, phi)`:
/// `(|0~> ± e^{i Phi} |1~>)/sqrt 2`.
fn complementary_basis(theta: f64, phi: f64, phase: f64) -> Basis {
    let [v0, v1] = local_basis(theta, phi);
    let e = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, phase);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [[v0[0] * h + e * v1[0], v0[1] * h + e * v1[1]], [v0[0] * h - e * v1[0], v0[1] * h - e * v1[1]]]
}

fn readout(rho: &DensityMatrix, ba: &Basis, bb: &Basis) -> JointDistribution {
    let mut probs = [0.0; 4];
    for i in 0..2 {
        for j in 0..2 {
            let v = [ba[i][0] * bb[j][0], ba[i][0] * bb[j][1], ba[i][1] * bb[j][0], ba[i][1] * bb[j][1]];
            probs[2 * i + j] = rho.expectation(&v);
        }
    }
    JointDistribution::from_readout(probs)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::WrongDimension { expected: 4, found: rho.dim() });
    }
    Ok(())
}

/// Outcome distribution of `rho` read in the rotated product basis.
pub fn classical_state_probs(rho: &DensityMatrix, ang: &LocalBasisAngles) -> Result<JointDistribution> {
    require_two_qubits(rho)?;
    Ok(readout(rho, &local_basis(ang.theta_a, ang.phi_a), &local_basis(ang.theta_b, ang.phi_b)))
}

/// Outcome distribution in the bases complementary to `ang`.
pub fn complementary_probs(rho: &DensityMatrix, ang: &LocalBasisAngles, ph: &ComplementaryPhases) -> Result<JointDistribution> {
    require_two_qubits(rho)?;
    Ok(readout(
        rho,
        &complementary_basis(ang.theta_a, ang.phi_a, ph.phase_a),
        &complementary_basis(ang.theta_b, ang.phi_b, ph.phase_b),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalCorrelation {
    pub value: f64,
    pub angles: LocalBasisAngles,
}

/// Global minimum over all product bases of the classical-state mutual
/// information.
pub fn classical_correlation(rho: &DensityMatrix) -> Result<ClassicalCorrelation> {
    classical_correlation_with(rho, &OracleConfig::default())
}

pub fn classical_correlation_with(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<ClassicalCorrelation> {
    require_two_qubits(rho)?;
    let f = |x: &[f64]| {
        mutual_information(&readout(rho, &local_basis(x[0], x[2]), &local_basis(x[1], x[3])))
    };
    let axes = [
        GridAxis::closed(0.0, PI, cfg.theta_points),
        GridAxis::closed(0.0, PI, cfg.theta_points),
        GridAxis::periodic(0.0, 2.0 * PI, cfg.phi_points),
        GridAxis::periodic(0.0, 2.0 * PI, cfg.phi_points),
    ];
    let m = grid_then_refine(&f, &axes, cfg.seeds, &NelderMeadOptions::default())?;
    Ok(ClassicalCorrelation { value: m.value, angles: LocalBasisAngles::new(m.x[0], m.x[1], m.x[2], m.x[3]) })
}

/// Maximizes the complementary-basis mutual information over both phases.
pub fn complementary_maximum(rho: &DensityMatrix, ang: &LocalBasisAngles, cfg: &OracleConfig) -> Result<(f64, ComplementaryPhases)> {
    require_two_qubits(rho)?;
    let f = |x: &[f64]| {
        -mutual_information(&readout(
            rho,
            &complementary_basis(ang.theta_a, ang.phi_a, x[0]),
            &complementary_basis(ang.theta_b, ang.phi_b, x[1]),
        ))
    };
    let axes = [GridAxis::periodic(0.0, 2.0 * PI, cfg.phase_points), GridAxis::periodic(0.0, 2.0 * PI, cfg.phase_points)];
    let m = grid_then_refine(&f, &axes, cfg.seeds, &NelderMeadOptions::default())?;
    Ok((-m.value, ComplementaryPhases { phase_a: m.x[0], phase_b: m.x[1] }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// Computational basis = global minimizer of the classical correlation.
    Literal,
    /// Computational basis = principal-axis pair with the most classical
    /// correlation.
    Constructive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleOutcome {
    pub mode: OracleMode,
    pub value: f64,
    /// Classical mutual information in the chosen computational basis.
    pub classical: f64,
    pub computational: LocalBasisAngles,
    pub complementary: ComplementaryPhases,
}

/// LAQC by direct numerical search on the density matrix.
pub fn laqc_oracle(rho: &DensityMatrix, mode: OracleMode) -> Result<OracleOutcome> {
    laqc_oracle_with(rho, mode, &OracleConfig::default())
}

pub fn laqc_oracle_with(rho: &DensityMatrix, mode: OracleMode, cfg: &OracleConfig) -> Result<OracleOutcome> {
    require_two_qubits(rho)?;
    let (classical, computational) = match mode {
        OracleMode::Literal => {
            let cc = classical_correlation_with(rho, cfg)?;
            (cc.value, cc.angles)
        }
        OracleMode::Constructive => {
            let mut best: Option<(f64, LocalBasisAngles)> = None;
            for (na, nb) in principal_axis_pairs(rho)? {
                let ang = LocalBasisAngles::from_directions(&na, &nb);
                let mi = mutual_information(&classical_state_probs(rho, &ang)?);
                if best.is_none_or(|(v, _)| mi > v + 1e-12) {
                    best = Some((mi, ang));
                }
            }
            best.expect("three candidates")
        }
    };
    let (value, complementary) = complementary_maximum(rho, &computational, cfg)?;
    Ok(OracleOutcome { mode, value, classical, computational, complementary })
}

/// Pairs of local directions `(u_k, v_k)` from the singular value
/// decomposition `T = U diag(sigma) V^T` of the correlation matrix, in
/// descending order of `sigma`. Within a degenerate singular subspace the
/// first pair is turned towards the local Bloch vectors so that their bias is
/// captured by a candidate.
pub fn principal_axis_pairs(rho: &DensityMatrix) -> Result<[(Vector3<f64>, Vector3<f64>); 3]> {
    let (a, b, t) = qmat::bloch_decomposition(rho)?;
    let (a, b) = (Vector3::from(a), Vector3::from(b));
    let svd = t.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma: Vec<f64> = idx.iter().map(|&k| svd.singular_values[k]).collect();
    let mut us: Vec<Vector3<f64>> = idx.iter().map(|&k| u.column(k).into_owned()).collect();
    let mut vs: Vec<Vector3<f64>> = idx.iter().map(|&k| vt.row(k).transpose()).collect();

    const DEGENERATE: f64 = 1e-9;
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && (sigma[end - 1] - sigma[end]).abs() <= DEGENERATE {
            end += 1;
        }
        if end - start >= 2 {
            align_group(&t, &a, &b, sigma[start], &mut us[start..end], &mut vs[start..end]);
        }
        start = end;
    }
    Ok([(us[0], vs[0]), (us[1], vs[1]), (us[2], vs[2])])
}

fn project(v: &Vector3<f64>, span: &[Vector3<f64>]) -> Vector3<f64> {
    span.iter().map(|e| e * e.dot(v)).sum()
}

fn complete(first: Vector3<f64>, span: &mut [Vector3<f64>]) {
    let mut basis = vec![first];
    for cand in span.iter() {
        if basis.len() == span.len() {
            break;
        }
        let mut w = *cand;
        for e in &basis {
            w -= e * e.dot(&w);
        }
        if w.norm() > 1e-6 {
            basis.push(w.normalize());
        }
    }
    span.copy_from_slice(&basis[..span.len()]);
}

fn align_group(t: &Matrix3<f64>, a: &Vector3<f64>, b: &Vector3<f64>, sigma: f64, us: &mut [Vector3<f64>], vs: &mut [Vector3<f64>]) {
    const SMALL: f64 = 1e-9;
    let pa = project(a, us);
    let pb = project(b, vs);
    if sigma > SMALL {
        let first_u = if pa.norm() > SMALL {
            pa.normalize()
        } else if pb.norm() > SMALL {
            (t * pb.normalize()).normalize()
        } else {
            return;
        };
        complete(first_u, us);
        for (u, v) in us.iter().zip(vs.iter_mut()) {
            *v = (t.transpose() * u) / sigma;
        }
    } else {
        if pa.norm() > SMALL {
            complete(pa.normalize(), us);
        }
        if pb.norm() > SMALL {
            complete(pb.normalize(), vs);
        }
    }
}

/// `(1+T)/2 log2(1+T) + (1-T)/2 log2(1-T)`: mutual information of a
/// readout with uniform marginals and correlation `T`.
pub fn axis_information(t: f64) -> f64 {
    debug_assert!(t.abs() <= 1.0 + CLAMP_TOL, "correlation {t} outside [-1, 1]");
    let t = t.clamp(-1.0, 1.0);
    0.5 * (plogp(1.0 + t) + plogp(1.0 - t))
}

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// The third closed-form term with its printed prefactor of one quarter.
pub fn g3_quarter_prefactor(x: &XState) -> f64 {
    let p = x.bloch();
    let [a, b, cc, d] = x.populations();
    let term = |w: f64, num: f64, den: f64| if w > 0.0 { w * (num / den).log2() } else { 0.0 };
    0.25 * (term(a, 1.0 + p.x3 + p.y3 + p.t3, (1.0 + p.x3) * (1.0 + p.y3))
        + term(b, 1.0 + p.x3 - p.y3 - p.t3, (1.0 + p.x3) * (1.0 - p.y3))
        + term(cc, 1.0 - p.x3 + p.y3 - p.t3, (1.0 - p.x3) * (1.0 + p.y3))
        + term(d, 1.0 - p.x3 - p.y3 + p.t3, (1.0 - p.x3) * (1.0 - p.y3)))
}

/// Mutual information of the computational-basis readout `(a, b, c, d)`.
pub fn g3_mutual_information(x: &XState) -> f64 {
    mutual_information(&JointDistribution::from_readout(x.populations()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GValues {
    pub g1: f64,
    pub g2: f64,
    /// Mutual-information form, used by the closed form.
    pub g3: f64,
    /// Same expression with the extra quarter prefactor.
    pub g3_quarter: f64,
}

impl GValues {
    pub fn adjudicated(&self) -> [f64; 3] {
        [self.g1, self.g2, self.g3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    const ORDER: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaqcClosedForm {
    pub g: GValues,
    /// `max{g1, g2, g3}` with the quarter-prefactor `g3`, as printed.
    pub literal_max: f64,
    /// Axis of the optimal computational basis (largest classical correlation).
    pub computational_axis: PauliAxis,
    pub laqc: f64,
}

/// Closed-form LAQC of an X state.
pub fn laqc_xstate(x: &XState) -> LaqcClosedForm {
    let p = x.bloch();
    let g = GValues {
        g1: axis_information(p.t1),
        g2: axis_information(p.t2),
        g3: g3_mutual_information(x),
        g3_quarter: g3_quarter_prefactor(x),
    };
    let vals = g.adjudicated();
    // first index wins ties
    let mut k = 0;
    for i in 1..3 {
        if vals[i] > vals[k] {
            k = i;
        }
    }
    let laqc = (0..3).filter(|&i| i != k).map(|i| vals[i]).fold(0.0, f64::max);
    LaqcClosedForm {
        g,
        literal_max: g.g1.max(g.g2).max(g.g3_quarter),
        computational_axis: PauliAxis::ORDER[k],
        laqc,
    }
}

/// Family-specific LAQC formulas.
pub fn laqc_family(f: FamilyId) -> f64 {
    let p = f.param();
    match f.tag {
        FamilyTag::Werner | FamilyTag::Alpha | FamilyTag::Vv | FamilyTag::Mems => axis_information(p),
        FamilyTag::Beta => 1.0 + plogp(p) + plogp(1.0 - p),
    }
}

/// Off-pattern entries up to this modulus still count as X form.
const X_PATTERN_TOL: f64 = 1e-15;

/// Wootters concurrence `max{0, l1 - l2 - l3 - l4}`.
///
/// X-form input uses the exact reduction
/// `2 max{0, |rho_03| - sqrt(rho_11 rho_22), |rho_12| - sqrt(rho_00 rho_33)}`.
/// A generic spectral route loses about `sqrt(eps)` on rank-deficient
/// states, which the family endpoints are.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let min = *qmat::hermitian_eigenvalues(rho)?.last().expect("4 eigenvalues");
    if min < -qmat::tol::PSD {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    if rho.off_x_pattern() <= X_PATTERN_TOL {
        let e = |i, j| rho.entry(i, j);
        let pop = |i: usize| e(i, i).re.max(0.0);
        let outer = e(0, 3).norm() - (pop(1) * pop(2)).sqrt();
        let inner = e(1, 2).norm() - (pop(0) * pop(3)).sqrt();
        return Ok((2.0 * outer.max(inner)).clamp(0.0, 1.0));
    }
    wootters_spectral(rho)
}

/// The `l_i` as singular values of `sqrt(rho) (sigma_y ⊗ sigma_y)
/// conj(sqrt(rho))`, equal to the square roots of the spectrum of
/// `rho rho~`.
fn wootters_spectral(rho: &DensityMatrix) -> Result<f64> {
    let root = qmat::psd_sqrt(rho)?;
    let yy = qmat::pauli_pair(2, 2);
    let m = &root * yy * root.map(|z| z.conj());
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok((sv[0] - sv[1] - sv[2] - sv[3]).max(0.0))
}

/// Family-specific concurrence formulas.
pub fn concurrence_family(f: FamilyId) -> f64 {
    let p = f.param();
    match f.tag {
        FamilyTag::Werner => (0.5 * (3.0 * p - 1.0)).max(0.0),
        FamilyTag::Alpha => (2.0 * p - 1.0).max(0.0),
        FamilyTag::Beta => (1.0 - 2.0 * p).abs(),
        FamilyTag::Vv | FamilyTag::Mems => p,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub laqc_closed: f64,
    pub laqc_literal_max: f64,
    pub laqc_oracle: f64,
    pub laqc_oracle_literal: f64,
    pub classical_corr: f64,
    pub concurrence: f64,
    pub computational: LocalBasisAngles,
    pub complementary: ComplementaryPhases,
    pub g_values: GValues,
}

/// Every quantifier for one X state, closed form and numerical.
pub fn correlation_report(x: &XState) -> Result<CorrelationReport> {
    let rho = x.density_matrix();
    let closed = laqc_xstate(x);
    let constructive = laqc_oracle(&rho, OracleMode::Constructive)?;
    let literal = laqc_oracle(&rho, OracleMode::Literal)?;
    Ok(CorrelationReport {
        laqc_closed: closed.laqc,
        laqc_literal_max: closed.literal_max,
        laqc_oracle: constructive.value,
        laqc_oracle_literal: literal.value,
        classical_corr: literal.classical,
        concurrence: concurrence(&rho)?,
        computational: constructive.computational,
        complementary: constructive.complementary,
        g_values: closed.g,
    })
}
