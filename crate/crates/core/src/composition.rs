//! Two angular momenta in a product state.
//!
//! Components of `J₁` and `J₂` along a common axis commute, so the total
//! projection distribution is the convolution of the two factor
//! distributions; the full tensor product is never formed.

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::Result;
use crate::halfint::HalfInt;
use crate::spin_core::{measurement_distribution, Direction, MDistribution, SpinOperators, SpinState};

#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    pub left: SpinState,
    pub right: SpinState,
}

impl ProductState {
    pub fn new(left: SpinState, right: SpinState) -> Self {
        ProductState { left, right }
    }

    /// Largest total spin, `j₁ + j₂`.
    pub fn j_max(&self) -> HalfInt {
        self.left.j() + self.right.j()
    }
}

/// Full convolution of two sequences.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

/// Distribution of `(J₁ + J₂)·axis` over `m ∈ [−j₁−j₂, j₁+j₂]`.
pub fn product_projection_distribution(p: &ProductState, axis: Direction) -> Result<MDistribution> {
    let a = measurement_distribution(&p.left, axis)?;
    let b = measurement_distribution(&p.right, axis)?;
    // index 0 of each factor is its lowest m, so the sum index starts at −j₁−j₂
    Ok(MDistribution { j: p.j_max(), probs: convolve(&a.probs, &b.probs) })
}

/// `|j₁n₁ + j₂n₂|` and its direction, which is undefined when the sum
/// vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalSum {
    pub j_tot: f64,
    pub direction: Option<Direction>,
}

impl ClassicalSum {
    pub fn is_degenerate(&self) -> bool {
        self.direction.is_none()
    }
}

pub fn classical_sum(j1: HalfInt, n1: Direction, j2: HalfInt, n2: Direction) -> ClassicalSum {
    let v = n1.vector() * j1.value() + n2.vector() * j2.value();
    let mag = v.norm();
    let scale = j1.value() + j2.value();
    if mag <= 1e-12 * scale {
        return ClassicalSum { j_tot: 0.0, direction: None };
    }
    ClassicalSum { j_tot: mag, direction: Direction::from_vector(v) }
}

fn mean_spin(s: &SpinState) -> Vector3<f64> {
    SpinOperators::new(s.j()).expectation_vector(s)
}

/// `⟨(J₁+J₂)²⟩ = j₁(j₁+1) + j₂(j₂+1) + 2⟨J₁⟩·⟨J₂⟩`, exact for any product
/// state; for coherent factors the cross term is `2j₁j₂ n₁·n₂`.
pub fn total_j2_expectation(p: &ProductState) -> f64 {
    let (j1, j2) = (p.left.j().value(), p.right.j().value());
    j1 * (j1 + 1.0) + j2 * (j2 + 1.0) + 2.0 * mean_spin(&p.left).dot(&mean_spin(&p.right))
}

/// `⟨A L·S⟩ = (A/2)(⟨J²⟩ − L(L+1) − S(S+1))` for coherent orbital and spin
/// factors, which reduces to `A·L·S·(n_L·n_S)`.
pub fn spin_orbit_energy(a: f64, l: HalfInt, n_l: Direction, s: HalfInt, n_s: Direction) -> f64 {
    let (lv, sv) = (l.value(), s.value());
    let j2 = lv * (lv + 1.0) + sv * (sv + 1.0) + 2.0 * lv * sv * n_l.dot(&n_s);
    0.5 * a * (j2 - lv * (lv + 1.0) - sv * (sv + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_core::coherent_state;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn hi(twice: u32) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    #[test]
    fn aligned_tops_give_a_delta() {
        let p = ProductState::new(SpinState::basis(hi(3), 3).unwrap(), SpinState::basis(hi(4), 4).unwrap());
        let d = product_projection_distribution(&p, Direction::Z).unwrap();
        assert_eq!(d.probs.len(), 8);
        assert_eq!(*d.probs.last().unwrap(), 1.0);
        assert_eq!(d.argmax_m(), 3.5);
    }

    #[test]
    fn convolution_matches_double_sum() {
        let a = [0.1, 0.2, 0.7];
        let b = [0.5, 0.25, 0.125, 0.125];
        let c = convolve(&a, &b);
        for (s, &v) in c.iter().enumerate() {
            let mut want = 0.0;
            for i in 0..a.len() {
                for k in 0..b.len() {
                    if i + k == s {
                        want += a[i] * b[k];
                    }
                }
            }
            assert!((v - want).abs() < 1e-15);
        }
    }

    #[test]
    fn variances_add() {
        let p = ProductState::new(
            coherent_state(hi(5), Direction::new(0.7, 0.2)),
            coherent_state(hi(8), Direction::new(2.0, 3.0)),
        );
        let axis = Direction::new(1.2, 0.5);
        let tot = product_projection_distribution(&p, axis).unwrap();
        let l = measurement_distribution(&p.left, axis).unwrap();
        let r = measurement_distribution(&p.right, axis).unwrap();
        assert!((tot.variance() - l.variance() - r.variance()).abs() < 1e-10);
        assert!((tot.mean() - l.mean() - r.mean()).abs() < 1e-12);
    }

    #[test]
    fn classical_sum_cases() {
        let n = Direction::new(0.4, 1.0);
        let s = classical_sum(hi(3), n, hi(5), n);
        assert!((s.j_tot - 4.0).abs() < 1e-12);
        assert!(s.direction.unwrap().angle_to(&n) < 1e-12);

        let alpha = 1.3;
        let s = classical_sum(hi(6), Direction::Z, hi(6), Direction::new(alpha, 0.0));
        assert!((s.j_tot - 6.0 * (alpha / 2.0).cos()).abs() < 1e-12);

        let s = classical_sum(hi(4), Direction::X, hi(4), Direction::new(FRAC_PI_2, PI));
        assert!(s.is_degenerate() && s.j_tot == 0.0);
    }

    #[test]
    fn j2_closed_forms() {
        let p = ProductState::new(coherent_state(hi(1), Direction::Z), coherent_state(hi(1), Direction::Z));
        assert!((total_j2_expectation(&p) - 2.0).abs() < 1e-14);
        let p = ProductState::new(coherent_state(hi(10), Direction::Z), coherent_state(hi(10), Direction::X));
        assert!((total_j2_expectation(&p) - 60.0).abs() < 1e-12);
    }

    #[test]
    fn spin_orbit_examples() {
        let l = HalfInt::from_int(10);
        assert!(spin_orbit_energy(1.0, l, Direction::Z, l, Direction::X).abs() < 1e-12);
        assert!((spin_orbit_energy(1.0, l, Direction::Z, hi(1), Direction::Z) - 5.0).abs() < 1e-12);
        assert!((spin_orbit_energy(1.0, l, Direction::Z, l, Direction::MINUS_Z) + 100.0).abs() < 1e-12);
    }
}
