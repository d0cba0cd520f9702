use laqc_core::correlations::{axis_information, concurrence, mutual_information, JointDistribution};
use laqc_core::qmat::{local_unitary, validate_density, DensityMatrix};
use laqc_core::swap::{bloch_of, probability_scale, swap_bloch, swap_oracle, MeasurementState};
use laqc_core::XState;
use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::FRAC_PI_2;

fn xstate() -> impl Strategy<Value = XState> {
    (prop::array::uniform4(0.001f64..1.0), -1.0f64..=1.0, -1.0f64..=1.0).prop_map(|(w, u, v)| {
        let t: f64 = w.iter().sum();
        let [a, b, c, d] = w.map(|x| x / t);
        let shrink = 1.0 - 1e-12;
        XState::new(a, b, c, d, u * (a * d).sqrt() * shrink, v * (b * c).sqrt() * shrink).unwrap()
    })
}

fn unitary() -> impl Strategy<Value = Matrix2<Complex64>> {
    (0.0f64..std::f64::consts::PI, 0.0f64..6.3, 0.0f64..6.3, 0.0f64..6.3).prop_map(|(t, p1, p2, p3)| {
        let (s, c) = (0.5 * t).sin_cos();
        let e = |x: f64| Complex64::from_polar(1.0, x);
        Matrix2::new(e(p1) * c, -e(p2) * s, e(-p2) * s, e(-p1) * c) * e(p3)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn g_is_even_and_bounded(t in -1.0f64..=1.0) {
        let g = axis_information(t);
        prop_assert_eq!(g, axis_information(-t));
        prop_assert!((0.0..=1.0).contains(&g));
    }

    #[test]
    fn mutual_information_is_nonnegative(w in prop::array::uniform4(0.0f64..1.0)) {
        let t: f64 = w.iter().sum();
        prop_assume!(t > 1e-6);
        let r = JointDistribution::new(w.map(|x| x / t)).unwrap();
        let i = mutual_information(&r);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&i));
    }

    #[test]
    fn closed_swap_matches_oracle(ab in xstate(), cd in xstate(), xi in -FRAC_PI_2..=FRAC_PI_2) {
        let m = MeasurementState::new(xi).unwrap();
        match swap_oracle(&ab.density_matrix(), &cd.density_matrix(), m) {
            Ok((out, prob)) => {
                let closed = swap_bloch(&ab.bloch(), &cd.bloch(), m).unwrap();
                prop_assert!(closed.normalized.max_abs_diff(&bloch_of(&out).unwrap()) < 1e-10);
                prop_assert!((closed.norm / prob - probability_scale()).abs() < 1e-9);
                prop_assert!((0.0..=1.0).contains(&closed.prob));
                prop_assert!(out.off_x_pattern() <= 1e-12);
                let state = closed.normalized.to_xstate().unwrap();
                prop_assert!(validate_density(&state.density_matrix(), 1e-10).passed);
            }
            Err(_) => prop_assert!(swap_bloch(&ab.bloch(), &cd.bloch(), m).is_err()),
        }
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(x in xstate(), ua in unitary(), ub in unitary()) {
        let rho = x.density_matrix();
        let rotated = rho.conjugate_by(&local_unitary(&ua, &ub)).unwrap();
        let (c0, c1) = (concurrence(&rho).unwrap(), concurrence(&rotated).unwrap());
        prop_assert!((0.0..=1.0).contains(&c0));
        prop_assert!((c0 - c1).abs() < 1e-9);
    }

    #[test]
    fn fano_round_trip(x in xstate()) {
        let rho: DensityMatrix = x.density_matrix();
        prop_assert!(bloch_of(&rho).unwrap().max_abs_diff(&x.bloch()) < 1e-14);
    }
}
