//! Seeded random states and local unitaries for property checks and the
//! verification suites.

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::Rng;

use crate::xstate::XState;

/// Random valid X state: populations uniform on the simplex, coherences
/// uniform inside their positivity bounds with random sign.
pub fn random_xstate<R: Rng + ?Sized>(rng: &mut R) -> XState {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = e.iter().sum();
    let [a, b, c, d] = e.map(|x| x / total);
    let r = rng.random_range(-1.0..=1.0) * (a * d).sqrt();
    let s = rng.random_range(-1.0..=1.0) * (b * c).sqrt();
    // shrink by a hair so rounding never pushes the state out of bounds
    XState::new(a, b, c, d, r * (1.0 - 1e-12), s * (1.0 - 1e-12)).expect("sampled inside the X-state region")
}

/// Haar-random single-qubit unitary.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> Matrix2<Complex64> {
    // normalized 4-vector of Gaussians -> SU(2), times a global phase
    let g: [f64; 4] = std::array::from_fn(|_| gaussian(rng));
    let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [w, x, y, z] = g.map(|v| v / n);
    let alpha = Complex64::new(w, z);
    let beta = Complex64::new(y, x);
    let phase = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    Matrix2::new(alpha, -beta.conj(), beta, alpha.conj()) * phase
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = random_xstate(&mut rng);
            let rep = crate::qmat::validate_density(&x.density_matrix(), 1e-12);
            assert!(rep.passed, "{rep:?}");
        }
    }

    #[test]
    fn sampled_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let u = random_unitary(&mut rng);
            let err = (u.adjoint() * u - Matrix2::identity()).norm();
            assert!(err < 1e-14);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let draw = || {
            let mut rng = ChaCha8Rng::seed_from_u64(42);
            random_xstate(&mut rng)
        };
        assert_eq!(draw(), draw());
    }
}
