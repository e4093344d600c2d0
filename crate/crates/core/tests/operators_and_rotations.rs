mod common;

use common::{kron, ladder_matrices, max_abs};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

use spinj::composition::{total_j2_expectation, ProductState};
use spinj::rotations::{rotate_state, wigner_d, EulerAngles};
use spinj::spin_core::{coherent_state, random_state, Component, SpinOperators};
use spinj::{Direction, HalfInt};
use std::f64::consts::PI;

#[test]
fn dense_operators_match_ladder_oracle() {
    for twice in 0..=12 {
        let ops = SpinOperators::new(HalfInt::from_twice(twice));
        let [x, y, z] = ladder_matrices(twice);
        for (c, oracle) in [(Component::X, x), (Component::Y, y), (Component::Z, z)] {
            assert!(max_abs(&(ops.dense(c).unwrap() - oracle)) < 1e-13, "2j={twice} {c:?}");
        }
    }
}

#[test]
fn product_state_j2_matches_kronecker_sum() {
    let mut worst: f64 = 0.0;
    for t1 in 1..=5 {
        for t2 in 1..=5 {
            let (a, b) = (ladder_matrices(t1), ladder_matrices(t2));
            let (d1, d2) = (t1 as usize + 1, t2 as usize + 1);
            let mut j2 = DMatrix::<C64>::zeros(d1 * d2, d1 * d2);
            for c in 0..3 {
                let tot = kron(&a[c], &DMatrix::identity(d2, d2)) + kron(&DMatrix::identity(d1, d1), &b[c]);
                j2 += &tot * &tot;
            }
            let (s1, s2) = (random_state(HalfInt::from_twice(t1), 11), coherent_state(HalfInt::from_twice(t2), Direction::new(0.7, 2.0)));
            let psi = kron(&DMatrix::from_vec(d1, 1, s1.amplitudes()), &DMatrix::from_vec(d2, 1, s2.amplitudes()));
            let oracle = (psi.adjoint() * &j2 * &psi)[(0, 0)].re;
            worst = worst.max((total_j2_expectation(&ProductState::new(s1, s2)) - oracle).abs() / oracle);
        }
    }
    assert!(worst < 1e-10, "{worst:e}");
}

/// `D(γ, θ, φ) = exp(iγJ_z) exp(iθJ_y) exp(iφJ_z)`, from the matrix exponential.
fn exp_oracle(twice: u32, o: &EulerAngles) -> DMatrix<C64> {
    let [_, y, z] = ladder_matrices(twice);
    let e = |m: &DMatrix<C64>, a: f64| (m * C64::new(0.0, a)).exp();
    e(&z, o.gamma) * e(&y, o.theta) * e(&z, o.phi)
}

#[test]
fn wigner_matrix_matches_matrix_exponential() {
    for twice in 1..=16 {
        for o in [EulerAngles::new(0.3, 1.1, -2.0), EulerAngles::new(-1.0, 2.9, 0.4), EulerAngles::new(0.0, 0.0, 1.0)] {
            let d = wigner_d(HalfInt::from_twice(twice), &o).unwrap();
            let diff = max_abs(&(d.matrix() - exp_oracle(twice, &o)));
            assert!(diff < 1e-11, "2j={twice} {o:?}: {diff:e}");
        }
    }
}

#[test]
fn wigner_half_is_rotation_of_pauli_spinors() {
    // first column of the θ = π rotation sends ↓ into ↑ with a sign
    let d = wigner_d(HalfInt::HALF, &EulerAngles::new(0.0, std::f64::consts::PI, 0.0)).unwrap();
    let [[a, b], [c, e]] = d.to_up_down().unwrap();
    assert!(a.norm() < 1e-15 && e.norm() < 1e-15);
    assert!((b - 1.0).norm() < 1e-15 && (c + 1.0).norm() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_preserves_every_state(twice in 1u32..40, seed in 0u64..1000, g in -3.0f64..3.0, t in 0.0f64..3.1, p in -3.0f64..3.0) {
        let s = random_state(HalfInt::from_twice(twice), seed);
        let r = rotate_state(&s, &EulerAngles::new(g, t, p)).unwrap();
        prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-12);
        // rotating back restores the state
        let back = wigner_d(s.j(), &EulerAngles::new(g, t, p)).unwrap().matrix().adjoint() * DMatrix::from_vec(s.dim(), 1, r.amplitudes());
        let overlap: C64 = back.iter().zip(s.amplitudes()).map(|(a, b)| a * b.conj()).sum();
        prop_assert!((overlap.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn coherent_expectation_points_along_n(twice in 1u32..200, t in 0.0f64..PI, p in -PI..PI) {
        let j = HalfInt::from_twice(twice);
        let n = Direction::new(t, p);
        let v = SpinOperators::new(j).expectation_vector(&coherent_state(j, n).to_dense());
        prop_assert!((v - n.vector() * j.value()).norm() < 1e-9 * j.value());
    }
}
