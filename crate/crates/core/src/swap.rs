//! Correlation swapping. Two X states on AB and CD are prepared, the middle
//! pair BC is projected onto
//! `|phi> = cos(xi/2)|00> + sin(xi/2)|11>`, and the outer pair AD is kept.
//!
//! [`swap_bloch`] is the closed-form map on Bloch parameters, [`swap_oracle`]
//! the explicit 16x16 computation it is checked against.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::correlations::{concurrence, laqc_xstate, LaqcClosedForm};
use crate::error::{Error, Result};
use crate::qmat::{self, c, tol, DensityMatrix};
use crate::xstate::{make_family, BlochX, FamilyId, XState};

/// Entries of the post-swap matrix outside the X pattern are accepted up to
/// this size when reading it back as an X state.
pub const CLOSURE_TOL: f64 = 1e-12;

/// The BC measurement state, parametrized by `xi` in `[-pi/2, pi/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasurementState {
    xi: f64,
}

impl MeasurementState {
    pub fn new(xi: f64) -> Result<Self> {
        if !xi.is_finite() || xi.abs() > FRAC_PI_2 + 1e-12 {
            return Err(Error::Domain { what: "measurement angle xi", value: xi });
        }
        Ok(Self { xi: xi.clamp(-FRAC_PI_2, FRAC_PI_2) })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Amplitudes on `|00>, |01>, |10>, |11>` of BC.
    pub fn ket(&self) -> [Complex64; 4] {
        let (s, co) = (0.5 * self.xi).sin_cos();
        [c(co), c(0.0), c(0.0), c(s)]
    }

    /// The same state with a bit flip on C:
    /// `cos(xi/2)|01> + sin(xi/2)|10>`.
    pub fn xgate_ket(&self) -> [Complex64; 4] {
        let (s, co) = (0.5 * self.xi).sin_cos();
        [c(0.0), c(co), c(s), c(0.0)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwapOutcome {
    /// Bloch parameters before normalization.
    pub raw: BlochX,
    /// Normalization factor `N`.
    pub norm: f64,
    pub normalized: BlochX,
    /// Probability of the BC projection.
    pub prob: f64,
    /// Normalized `T1`.
    pub u_v: f64,
}

/// Unnormalized post-swap Bloch parameters and the normalization factor.
pub fn swap_raw(ab: &BlochX, cd: &BlochX, m: MeasurementState) -> (BlochX, f64) {
    let (s, co) = m.xi.sin_cos();
    let raw = BlochX {
        x3: ab.x3 + ab.t3 * cd.x3 + co * (ab.t3 + ab.x3 * cd.x3),
        y3: cd.y3 + cd.t3 * ab.y3 + co * (cd.t3 + ab.y3 * cd.y3),
        t1: ab.t1 * cd.t1 * s,
        t2: -ab.t2 * cd.t2 * s,
        t3: ab.t3 * cd.t3 + ab.x3 * cd.y3 + co * (ab.t3 * cd.y3 + cd.t3 * ab.x3),
    };
    let norm = 1.0 + ab.y3 * cd.x3 + (ab.y3 + cd.x3) * co;
    (raw, norm)
}

/// Closed-form swap on Bloch parameters.
pub fn swap_bloch(ab: &BlochX, cd: &BlochX, m: MeasurementState) -> Result<SwapOutcome> {
    let (raw, norm) = swap_raw(ab, cd, m);
    if norm <= tol::PROB {
        return Err(Error::ZeroProbability { prob: norm / probability_scale() });
    }
    let normalized = raw.scaled(1.0 / norm);
    Ok(SwapOutcome { raw, norm, normalized, prob: norm / probability_scale(), u_v: normalized.t1 })
}

/// Explicit computation: `rho_AB ⊗ rho_CD`, projector
/// `I ⊗ |phi><phi| ⊗ I`, partial trace over BC. Returns the normalized AD
/// state and the outcome probability.
pub fn swap_oracle(rho_ab: &DensityMatrix, rho_cd: &DensityMatrix, m: MeasurementState) -> Result<(DensityMatrix, f64)> {
    project_middle_pair(rho_ab, rho_cd, &m.ket())
}

/// As [`swap_oracle`] with the bit-flipped measurement state.
pub fn swap_oracle_xgate_variant(rho_ab: &DensityMatrix, rho_cd: &DensityMatrix, m: MeasurementState) -> Result<(DensityMatrix, f64)> {
    project_middle_pair(rho_ab, rho_cd, &m.xgate_ket())
}

fn project_middle_pair(rho_ab: &DensityMatrix, rho_cd: &DensityMatrix, ket: &[Complex64; 4]) -> Result<(DensityMatrix, f64)> {
    for rho in [rho_ab, rho_cd] {
        if rho.dim() != 4 {
            return Err(Error::WrongDimension { expected: 4, found: rho.dim() });
        }
    }
    let global = qmat::kron(rho_ab, rho_cd)?;
    let id = DensityMatrix::unnormalized(DMatrix::identity(2, 2))?;
    let bc = DensityMatrix::unnormalized(DMatrix::from_fn(4, 4, |i, j| ket[i] * ket[j].conj()))?;
    let p = qmat::kron(&qmat::kron(&id, &bc)?, &id)?.into_matrix();
    let projected = DensityMatrix::unnormalized(&p * global.as_matrix() * &p)?;
    let ad = qmat::partial_trace_bc(&projected)?;
    let prob = ad.trace().re;
    if prob <= tol::PROB {
        return Err(Error::ZeroProbability { prob });
    }
    Ok((ad.normalize()?, prob))
}

/// Bloch parameters `(x3, y3, T1, T2, T3)` of any two-qubit state.
pub fn bloch_of(rho: &DensityMatrix) -> Result<BlochX> {
    let f = qmat::fano_coefficients(rho)?;
    Ok(BlochX::new(f[3][0], f[0][3], f[1][1], f[2][2], f[3][3]))
}

/// Ratio `N / prob` between the normalization factor and the outcome
/// probability, measured once on a fixed reference pair.
pub fn probability_scale() -> f64 {
    static SCALE: OnceLock<f64> = OnceLock::new();
    *SCALE.get_or_init(|| measure_probability_scale().expect("reference pair has nonzero probability"))
}

/// Measures `N / prob` on the reference pair without caching.
pub fn measure_probability_scale() -> Result<f64> {
    let ab = XState::new(0.4, 0.1, 0.2, 0.3, 0.2, -0.1)?;
    let cd = XState::new(0.15, 0.35, 0.3, 0.2, -0.1, 0.25)?;
    let m = MeasurementState::new(0.3)?;
    let (_, prob) = swap_oracle(&ab.density_matrix(), &cd.density_matrix(), m)?;
    let (_, norm) = swap_raw(&ab.bloch(), &cd.bloch(), m);
    Ok(norm / prob)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SwapFamilyResult {
    pub ab: FamilyId,
    pub cd: FamilyId,
    pub xi: f64,
    pub outcome: SwapOutcome,
    pub state: XState,
    pub laqc: LaqcClosedForm,
    pub concurrence: f64,
}

/// Swaps two members of the same family and evaluates the post-swap LAQC
/// (closed form) and concurrence (on the reconstructed matrix).
pub fn swap_family(ab: FamilyId, cd: FamilyId, m: MeasurementState) -> Result<SwapFamilyResult> {
    if ab.tag != cd.tag {
        return Err(Error::InvalidXState(format!("family mismatch: {} vs {}", ab.tag, cd.tag)));
    }
    let outcome = swap_bloch(&make_family(ab).bloch(), &make_family(cd).bloch(), m)?;
    let state = outcome.normalized.to_xstate()?;
    Ok(SwapFamilyResult {
        ab,
        cd,
        xi: m.xi,
        outcome,
        state,
        laqc: laqc_xstate(&state),
        concurrence: concurrence(&state.density_matrix())?,
    })
}
