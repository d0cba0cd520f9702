//! Real canonical X states, their Bloch parametrization, and the five
//! one-parameter families (Werner, alpha, beta, basis-element mixtures and
//! maximally entangled mixed states).

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{self, c, DensityMatrix};

/// Slack allowed on the population and coherence constraints.
pub const STATE_TOL: f64 = 1e-12;

/// A two-qubit X state with real coherences:
///
/// ```text
/// | a 0 0 r |
/// | 0 b s 0 |
/// | 0 s c 0 |
/// | r 0 0 d |
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XState {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    r: f64,
    s: f64,
}

impl XState {
    pub fn new(a: f64, b: f64, c: f64, d: f64, r: f64, s: f64) -> Result<Self> {
        let pops = [a, b, c, d];
        if pops.iter().chain([r, s].iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidXState("non-finite entry".into()));
        }
        if let Some(p) = pops.iter().find(|&&p| p < -STATE_TOL) {
            return Err(Error::InvalidXState(format!("negative population {p}")));
        }
        let sum: f64 = pops.iter().sum();
        if (sum - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidXState(format!("populations sum to {sum}")));
        }
        let (a, b, c, d) = (a.max(0.0), b.max(0.0), c.max(0.0), d.max(0.0));
        if s.abs() > (b * c).sqrt() + STATE_TOL {
            return Err(Error::InvalidXState(format!("|s| = {} exceeds sqrt(bc) = {}", s.abs(), (b * c).sqrt())));
        }
        if r.abs() > (a * d).sqrt() + STATE_TOL {
            return Err(Error::InvalidXState(format!("|r| = {} exceeds sqrt(ad) = {}", r.abs(), (a * d).sqrt())));
        }
        Ok(Self { a, b, c, d, r, s })
    }

    pub fn maximally_mixed() -> Self {
        Self { a: 0.25, b: 0.25, c: 0.25, d: 0.25, r: 0.0, s: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn s(&self) -> f64 {
        self.s
    }

    /// Diagonal `(a, b, c, d)`.
    pub fn populations(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn bloch(&self) -> BlochX {
        BlochX {
            x3: self.a + self.b - self.c - self.d,
            y3: self.a - self.b + self.c - self.d,
            t1: 2.0 * (self.s + self.r),
            t2: 2.0 * (self.s - self.r),
            t3: self.a - self.b - self.c + self.d,
        }
    }

    pub fn from_bloch(p: &BlochX) -> Result<Self> {
        p.to_xstate()
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        let Self { a, b, c: cc, d, r, s } = *self;
        DensityMatrix::from_real(4, &[a, 0.0, 0.0, r, 0.0, b, s, 0.0, 0.0, s, cc, 0.0, r, 0.0, 0.0, d])
            .expect("4x4 is a supported shape")
    }

    /// Reads an X state off a 4x4 matrix whose X-pattern entries are real.
    /// Entries off the pattern and imaginary parts must be below `tol`.
    pub fn from_density(rho: &DensityMatrix, tol: f64) -> Result<Self> {
        if rho.dim() != 4 {
            return Err(Error::WrongDimension { expected: 4, found: rho.dim() });
        }
        let off = rho.off_x_pattern();
        if off > tol {
            return Err(Error::InvalidXState(format!("off-pattern entry of modulus {off:.3e}")));
        }
        let e = |i, j| rho.entry(i, j);
        for (i, j) in [(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (1, 2)] {
            if e(i, j).im.abs() > tol || (e(i, j) - e(j, i).conj()).norm() > tol {
                return Err(Error::InvalidXState(format!("entry ({i},{j}) is not real")));
            }
        }
        Self::new(e(0, 0).re, e(1, 1).re, e(2, 2).re, e(3, 3).re, e(0, 3).re, e(1, 2).re)
    }
}

impl Default for XState {
    fn default() -> Self {
        Self::maximally_mixed()
    }
}

/// Five-parameter Bloch (Fano) form of an X state: local third components
/// `x3`, `y3` and the diagonal correlations `t1`, `t2`, `t3`.
///
/// Values are not range-checked; raw swap outputs live here before
/// normalization. Use [`BlochX::to_xstate`] to validate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochX {
    pub x3: f64,
    pub y3: f64,
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl BlochX {
    pub const fn new(x3: f64, y3: f64, t1: f64, t2: f64, t3: f64) -> Self {
        Self { x3, y3, t1, t2, t3 }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.x3, self.y3, self.t1, self.t2, self.t3]
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.x3 * k, self.y3 * k, self.t1 * k, self.t2 * k, self.t3 * k)
    }

    pub fn max_abs_diff(&self, other: &BlochX) -> f64 {
        self.as_array().iter().zip(other.as_array()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Inverts the Bloch map, reporting the first violated constraint.
    pub fn to_xstate(&self) -> Result<XState> {
        let Self { x3, y3, t1, t2, t3 } = *self;
        let a = (1.0 + x3 + y3 + t3) / 4.0;
        let b = (1.0 + x3 - y3 - t3) / 4.0;
        let cc = (1.0 - x3 + y3 - t3) / 4.0;
        let d = (1.0 - x3 - y3 + t3) / 4.0;
        let s = (t1 + t2) / 4.0;
        let r = (t1 - t2) / 4.0;
        for (name, v) in [("a", a), ("b", b), ("c", cc), ("d", d)] {
            if v < -STATE_TOL {
                return Err(Error::UnphysicalBloch(format!("population {name} = {v} is negative")));
            }
        }
        let (a, b, cc, d) = (a.max(0.0), b.max(0.0), cc.max(0.0), d.max(0.0));
        if s.abs() > (b * cc).sqrt() + STATE_TOL {
            return Err(Error::UnphysicalBloch(format!("|s| = {} exceeds sqrt(bc) = {}", s.abs(), (b * cc).sqrt())));
        }
        if r.abs() > (a * d).sqrt() + STATE_TOL {
            return Err(Error::UnphysicalBloch(format!("|r| = {} exceeds sqrt(ad) = {}", r.abs(), (a * d).sqrt())));
        }
        XState::new(a, b, cc, d, r, s).map_err(|e| Error::UnphysicalBloch(e.to_string()))
    }
}

/// Strips the coherence phases of a general X state with a diagonal local
/// unitary `diag(1, e^{i alpha}) ⊗ diag(1, e^{i beta})`.
///
/// The input matrix carries `r e^{i chi}` at (00,11) and `s e^{i xi_ph}` at
/// (01,10).
pub fn canonicalize_phases(a: f64, b: f64, cc: f64, d: f64, r: f64, chi: f64, s: f64, xi_ph: f64) -> Result<XState> {
    if r < 0.0 || s < 0.0 {
        return Err(Error::InvalidXState("coherence moduli must be nonnegative".into()));
    }
    let rho = phased_density_matrix(a, b, cc, d, r, chi, s, xi_ph)?;
    let u = phase_stripping_unitary(chi, xi_ph);
    let real = rho.conjugate_by(&u)?;
    XState::from_density(&real, 1e-12)
}

/// The X-state matrix with complex coherences.
pub fn phased_density_matrix(a: f64, b: f64, cc: f64, d: f64, r: f64, chi: f64, s: f64, xi_ph: f64) -> Result<DensityMatrix> {
    XState::new(a, b, cc, d, r, s)?;
    let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(a), c(b), c(cc), c(d)]));
    m[(0, 3)] = Complex64::from_polar(r, chi);
    m[(3, 0)] = Complex64::from_polar(r, -chi);
    m[(1, 2)] = Complex64::from_polar(s, xi_ph);
    m[(2, 1)] = Complex64::from_polar(s, -xi_ph);
    DensityMatrix::new(m)
}

pub fn phase_stripping_unitary(chi: f64, xi_ph: f64) -> DMatrix<Complex64> {
    // (00,11) picks up e^{-i(alpha+beta)}, (01,10) picks up e^{i(beta-alpha)}.
    let alpha = 0.5 * (chi + xi_ph);
    let beta = 0.5 * (chi - xi_ph);
    let ua = Matrix2::new(c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, alpha));
    let ub = Matrix2::new(c(1.0), c(0.0), c(0.0), Complex64::from_polar(1.0, beta));
    qmat::local_unitary(&ua, &ub)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyTag {
    Werner,
    Alpha,
    Beta,
    Vv,
    Mems,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 5] = [FamilyTag::Werner, FamilyTag::Alpha, FamilyTag::Beta, FamilyTag::Vv, FamilyTag::Mems];

    pub fn name(&self) -> &'static str {
        match self {
            FamilyTag::Werner => "werner",
            FamilyTag::Alpha => "alpha",
            FamilyTag::Beta => "beta",
            FamilyTag::Vv => "vv",
            FamilyTag::Mems => "mems",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family '{s}' (expected werner, alpha, beta, vv or mems)"))
    }
}

/// A member of one of the five one-parameter families. Every family is
/// parametrized on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyId {
    pub tag: FamilyTag,
    param: f64,
}

impl FamilyId {
    pub fn new(tag: FamilyTag, param: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&param) {
            return Err(Error::Domain { what: tag.name(), value: param });
        }
        Ok(Self { tag, param })
    }

    pub fn param(&self) -> f64 {
        self.param
    }
}

/// Population parameter of the maximally entangled mixed states:
/// `1/3` below `gamma = 2/3`, `gamma/2` from there on.
pub fn gamma_cap(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Domain { what: "mems", value: gamma });
    }
    Ok(if gamma < 2.0 / 3.0 { 1.0 / 3.0 } else { gamma / 2.0 })
}

/// Builds the family member from its defining matrix.
pub fn make_family(f: FamilyId) -> XState {
    let p = f.param;
    let state = match f.tag {
        // z |psi-><psi-| + (1 - z) I / 4
        FamilyTag::Werner => {
            let diag = (1.0 - p) / 4.0;
            XState::new(diag, diag + p / 2.0, diag + p / 2.0, diag, 0.0, -p / 2.0)
        }
        FamilyTag::Alpha => XState::new(p / 2.0, (1.0 - p) / 2.0, (1.0 - p) / 2.0, p / 2.0, p / 2.0, 0.0),
        FamilyTag::Beta => XState::new(p / 2.0, (1.0 - p) / 2.0, (1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0),
        // F |psi-><psi-| + (1 - F) |00><00|
        FamilyTag::Vv => XState::new(1.0 - p, p / 2.0, p / 2.0, 0.0, 0.0, -p / 2.0),
        FamilyTag::Mems => {
            let g = gamma_cap(p).expect("domain checked by FamilyId");
            XState::new(g, 1.0 - 2.0 * g, 0.0, g, p / 2.0, 0.0)
        }
    };
    state.expect("family members are valid X states on [0, 1]")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub fn ket(&self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (z, p, m) = (c(0.0), c(h), c(-h));
        match self {
            BellState::PhiPlus => [p, z, z, p],
            BellState::PhiMinus => [p, z, z, m],
            BellState::PsiPlus => [z, p, p, z],
            BellState::PsiMinus => [z, p, m, z],
        }
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::pure(&self.ket()).expect("4-dimensional ket")
    }
}

/// `F |bell><bell| + (1 - F) |ij><ij|` for an arbitrary Bell state and basis
/// element, built directly as a matrix.
pub fn bell_basis_mixture(fidelity: f64, bell: BellState, i: usize, j: usize) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&fidelity) {
        return Err(Error::Domain { what: "bell-basis mixture", value: fidelity });
    }
    if i > 1 || j > 1 {
        return Err(Error::WrongDimension { expected: 2, found: i.max(j) });
    }
    let bell = bell.projector().into_matrix().map(|x| x * fidelity);
    let basis = DensityMatrix::basis_projector(4, 2 * i + j)?.into_matrix().map(|x| x * (1.0 - fidelity));
    DensityMatrix::new(bell + basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{tol, validate_density};
    use proptest::prelude::*;

    const EXACT: f64 = 1e-14;

    fn fam(tag: FamilyTag, p: f64) -> XState {
        make_family(FamilyId::new(tag, p).unwrap())
    }

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| i as f64 / (n - 1) as f64)
    }

    #[test]
    fn werner_bloch_is_isotropic() {
        for z in grid(101) {
            let p = fam(FamilyTag::Werner, z).bloch();
            assert!(p.max_abs_diff(&BlochX::new(0.0, 0.0, -z, -z, -z)) < EXACT);
        }
    }

    #[test]
    fn alpha_bloch() {
        for a in grid(101) {
            let p = fam(FamilyTag::Alpha, a).bloch();
            assert!(p.max_abs_diff(&BlochX::new(0.0, 0.0, a, -a, 2.0 * a - 1.0)) < EXACT);
        }
    }

    #[test]
    fn beta_bloch() {
        for b in grid(101) {
            let p = fam(FamilyTag::Beta, b).bloch();
            assert!(p.max_abs_diff(&BlochX::new(0.0, 0.0, 1.0, 1.0 - 2.0 * b, 2.0 * b - 1.0)) < EXACT);
        }
    }

    #[test]
    fn vv_bloch() {
        for f in grid(101) {
            let p = fam(FamilyTag::Vv, f).bloch();
            assert!(p.max_abs_diff(&BlochX::new(1.0 - f, 1.0 - f, -f, -f, 1.0 - 2.0 * f)) < EXACT);
        }
    }

    #[test]
    fn mems_bloch_follows_matrix() {
        // Local and T3 components follow the cap Gamma; the coherence gamma/2
        // gives T1 = -T2 = gamma.
        for g in grid(101) {
            let cap = gamma_cap(g).unwrap();
            let p = fam(FamilyTag::Mems, g).bloch();
            let expected = BlochX::new(1.0 - 2.0 * cap, -(1.0 - 2.0 * cap), g, -g, 4.0 * cap - 1.0);
            assert!(p.max_abs_diff(&expected) < EXACT, "gamma = {g}");
        }
        let p = fam(FamilyTag::Mems, 0.5).bloch();
        assert!((p.x3 - 1.0 / 3.0).abs() < EXACT && (p.y3 + 1.0 / 3.0).abs() < EXACT);
        assert!((p.t3 - 1.0 / 3.0).abs() < EXACT);
    }

    #[test]
    fn every_family_member_is_a_valid_density_matrix() {
        for tag in FamilyTag::ALL {
            for p in grid(101) {
                let rep = validate_density(&fam(tag, p).density_matrix(), tol::PSD);
                assert!(rep.passed, "{tag} at {p}: {rep:?}");
            }
        }
    }

    #[test]
    fn family_domain_is_enforced() {
        assert!(FamilyId::new(FamilyTag::Werner, -0.1).is_err());
        assert!(FamilyId::new(FamilyTag::Mems, 1.0 + 1e-9).is_err());
        assert!(FamilyId::new(FamilyTag::Beta, 1.0).is_ok());
    }

    #[test]
    fn gamma_cap_branches() {
        assert!((gamma_cap(0.0).unwrap() - 1.0 / 3.0).abs() < EXACT);
        assert!((gamma_cap(2.0 / 3.0).unwrap() - 1.0 / 3.0).abs() < EXACT);
        assert!((gamma_cap(0.5).unwrap() - 1.0 / 3.0).abs() < EXACT);
        assert!((gamma_cap(1.0).unwrap() - 0.5).abs() < EXACT);
        assert!(gamma_cap(1.5).is_err());
    }

    #[test]
    fn named_matrices() {
        let w1 = fam(FamilyTag::Werner, 1.0).density_matrix();
        assert!(w1.max_abs_diff(&BellState::PsiMinus.projector()) < EXACT);
        let b1 = fam(FamilyTag::Beta, 1.0).density_matrix();
        assert!(b1.max_abs_diff(&BellState::PhiPlus.projector()) < EXACT);
        let b0 = fam(FamilyTag::Beta, 0.0).density_matrix();
        assert!(b0.max_abs_diff(&BellState::PsiPlus.projector()) < EXACT);
        let mm = XState::maximally_mixed().density_matrix();
        assert!(mm.max_abs_diff(&DensityMatrix::maximally_mixed(4).unwrap()) < EXACT);
    }

    #[test]
    fn alpha_zero_is_diagonal_mixture() {
        let x = fam(FamilyTag::Alpha, 0.0);
        assert_eq!(x.populations(), [0.0, 0.5, 0.5, 0.0]);
        assert_eq!((x.r(), x.s()), (0.0, 0.0));
    }

    #[test]
    fn upper_mems_branch_is_phi_plus_mixed_with_zero_one() {
        for g in grid(101).filter(|&g| g >= 2.0 / 3.0) {
            let direct = bell_basis_mixture(g, BellState::PhiPlus, 0, 1).unwrap();
            assert!(fam(FamilyTag::Mems, g).density_matrix().max_abs_diff(&direct) < EXACT);
        }
    }

    #[test]
    fn vv_matches_direct_construction() {
        for f in grid(21) {
            let direct = bell_basis_mixture(f, BellState::PsiMinus, 0, 0).unwrap();
            assert!(fam(FamilyTag::Vv, f).density_matrix().max_abs_diff(&direct) < EXACT);
        }
    }

    #[test]
    fn bloch_inverse_examples() {
        let z = 0.4;
        let x = BlochX::new(0.0, 0.0, -z, -z, -z).to_xstate().unwrap();
        assert!(x.density_matrix().max_abs_diff(&fam(FamilyTag::Werner, z).density_matrix()) < EXACT);
        assert_eq!(BlochX::default().to_xstate().unwrap(), XState::maximally_mixed());
        let err = BlochX::new(0.0, 0.0, 1.0, 1.0, 1.0).to_xstate().unwrap_err();
        assert!(matches!(err, Error::UnphysicalBloch(ref m) if m.contains("sqrt(bc)")), "{err}");
    }

    #[test]
    fn invalid_states_are_rejected() {
        assert!(XState::new(0.5, 0.5, 0.1, -0.1, 0.0, 0.0).is_err());
        assert!(XState::new(0.3, 0.3, 0.3, 0.3, 0.0, 0.0).is_err());
        assert!(XState::new(0.25, 0.25, 0.25, 0.25, 0.26, 0.0).is_err());
        assert!(XState::new(0.25, 0.25, 0.25, 0.25, 0.0, -0.26).is_err());
    }

    #[test]
    fn phase_removal_keeps_moduli() {
        let x = canonicalize_phases(0.3, 0.2, 0.25, 0.25, 0.2, std::f64::consts::PI / 3.0, 0.1, std::f64::consts::PI / 7.0)
            .unwrap();
        assert!((x.r() - 0.2).abs() < EXACT && (x.s() - 0.1).abs() < EXACT);
        for (p, q) in x.populations().iter().zip([0.3, 0.2, 0.25, 0.25]) {
            assert!((p - q).abs() < EXACT);
        }
        let id = canonicalize_phases(0.3, 0.2, 0.25, 0.25, 0.2, 0.0, 0.1, 0.0).unwrap();
        assert_eq!(id, XState::new(0.3, 0.2, 0.25, 0.25, 0.2, 0.1).unwrap());
    }

    #[test]
    fn family_tag_parses() {
        assert_eq!("MEMS".parse::<FamilyTag>().unwrap(), FamilyTag::Mems);
        assert!("gauss".parse::<FamilyTag>().is_err());
    }

    fn arb_xstate() -> impl Strategy<Value = XState> {
        (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_filter_map(
            "degenerate",
            |(w, x, y, z, u, v)| {
                let sum = w + x + y + z;
                if sum < 1e-6 {
                    return None;
                }
                let (a, b, cc, d) = (w / sum, x / sum, y / sum, z / sum);
                XState::new(a, b, cc, d, u * (a * d).sqrt(), v * (b * cc).sqrt()).ok()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn bloch_round_trip(x in arb_xstate()) {
            let back = x.bloch().to_xstate().unwrap();
            for (p, q) in x.populations().iter().zip(back.populations()) {
                prop_assert!((p - q).abs() < 1e-12);
            }
            prop_assert!((x.r() - back.r()).abs() < 1e-12);
            prop_assert!((x.s() - back.s()).abs() < 1e-12);
        }

        #[test]
        fn bloch_matches_pauli_expectations(x in arb_xstate()) {
            let f = qmat::fano_coefficients(&x.density_matrix()).unwrap();
            let p = x.bloch();
            let from_traces = BlochX::new(f[3][0], f[0][3], f[1][1], f[2][2], f[3][3]);
            prop_assert!(p.max_abs_diff(&from_traces) < 1e-13);
        }
    }
}
