use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::time::Instant;

use laqc_core::correlations::{concurrence, concurrence_family, laqc_family, laqc_oracle, laqc_xstate, OracleMode};
use laqc_core::qmat::local_unitary;
use laqc_core::sampling::{random_unitary, random_xstate};
use laqc_core::swap::{bloch_of, swap_bloch, swap_family, swap_oracle, MeasurementState};
use laqc_core::{make_family, FamilyId, FamilyTag};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| i as f64 / (n - 1) as f64)
}

#[test]
fn closed_form_reproduces_family_laqc() {
    for tag in FamilyTag::ALL {
        for p in grid(101) {
            let f = FamilyId::new(tag, p).unwrap();
            let closed = laqc_xstate(&make_family(f)).laqc;
            assert!((closed - laqc_family(f)).abs() < 1e-10, "{tag} {p}: {closed} vs {}", laqc_family(f));
        }
    }
}

#[test]
fn family_concurrence_matches_wootters() {
    for tag in FamilyTag::ALL {
        for p in grid(101) {
            let f = FamilyId::new(tag, p).unwrap();
            let c = concurrence(&make_family(f).density_matrix()).unwrap();
            assert!((c - concurrence_family(f)).abs() < 1e-12, "{tag} {p}: {c} vs {}", concurrence_family(f));
        }
    }
}

#[test]
fn alpha_crossing() {
    let h = |a: f64| {
        let f = FamilyId::new(FamilyTag::Alpha, a).unwrap();
        laqc_family(f) - concurrence_family(f)
    };
    let (mut lo, mut hi) = (0.5 + 1e-9, 1.0 - 1e-9);
    assert!(h(lo) > 0.0 && h(hi) < 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((lo - 0.6872).abs() < 5e-4, "{lo}");
}

#[test]
fn constructive_oracle_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    let start = Instant::now();
    for _ in 0..200 {
        let x = random_xstate(&mut rng);
        let o = laqc_oracle(&x.density_matrix(), OracleMode::Constructive).unwrap();
        worst = worst.max((o.value - laqc_xstate(&x).laqc).abs());
    }
    assert!(worst < 1e-4, "worst deviation {worst}");
    let per_state = start.elapsed().as_secs_f64() / 200.0;
    assert!(per_state < 0.5, "{per_state} s per state");
}

#[test]
fn local_unitaries_leave_quantifiers_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let x = random_xstate(&mut rng);
        let rho = x.density_matrix();
        let u = local_unitary(&random_unitary(&mut rng), &random_unitary(&mut rng));
        let rotated = rho.conjugate_by(&u).unwrap();
        let (c0, c1) = (concurrence(&rho).unwrap(), concurrence(&rotated).unwrap());
        assert!((c0 - c1).abs() < 1e-6);
        let l0 = laqc_oracle(&rho, OracleMode::Constructive).unwrap().value;
        let l1 = laqc_oracle(&rotated, OracleMode::Constructive).unwrap().value;
        assert!((l0 - l1).abs() < 1e-6, "{l0} vs {l1}");
    }
}

#[test]
fn swap_closed_form_matches_oracle_with_one_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ratios = Vec::new();
    for _ in 0..300 {
        let (ab, cd) = (random_xstate(&mut rng), random_xstate(&mut rng));
        for xi in [-FRAC_PI_2, -FRAC_PI_4, 0.0, FRAC_PI_4, FRAC_PI_2] {
            let m = MeasurementState::new(xi).unwrap();
            let (out, prob) = swap_oracle(&ab.density_matrix(), &cd.density_matrix(), m).unwrap();
            let closed = swap_bloch(&ab.bloch(), &cd.bloch(), m).unwrap();
            assert!(closed.normalized.max_abs_diff(&bloch_of(&out).unwrap()) < 1e-10);
            assert!(out.off_x_pattern() < 1e-12);
            ratios.push(closed.norm / prob);
        }
    }
    let (lo, hi) = ratios.iter().fold((f64::MAX, f64::MIN), |(l, h), r| (l.min(*r), h.max(*r)));
    assert!(hi - lo < 1e-12, "spread {}", hi - lo);
}

#[test]
fn werner_laqc_grows_with_product() {
    let m = MeasurementState::new(FRAC_PI_2).unwrap();
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    for za in grid(21) {
        for zc in grid(21) {
            let r = swap_family(
                FamilyId::new(FamilyTag::Werner, za).unwrap(),
                FamilyId::new(FamilyTag::Werner, zc).unwrap(),
                m,
            )
            .unwrap();
            pairs.push((za * zc, r.laqc.laqc));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in pairs.windows(2) {
        if w[1].0 > w[0].0 + 1e-12 {
            assert!(w[1].1 > w[0].1, "{w:?}");
        } else {
            assert!((w[1].1 - w[0].1).abs() < 1e-12);
        }
    }
}
