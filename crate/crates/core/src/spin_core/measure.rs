use serde::Serialize;

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::rotations::{rotate_state, EulerAngles, DENSE_ROTATION_LIMIT};
use crate::spin_core::{almost_oriented_state, Direction, SpinState};

/// Up to this `2j` orientation metadata is ignored and every measurement
/// goes through an explicit rotation.
const ALWAYS_ROTATE_LIMIT: u32 = 128;

/// Probabilities over `m = -j, …, j` (index `k` ↔ `m = -j + k`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MDistribution {
    pub j: HalfInt,
    pub probs: Vec<f64>,
}

impl MDistribution {
    pub fn m(&self, k: usize) -> f64 {
        self.j.m_of_index(k)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(k, p)| self.m(k) * p).sum()
    }

    /// Central second moment, accumulated around the mean.
    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.probs.iter().enumerate().map(|(k, p)| (self.m(k) - mu).powi(2) * p).sum()
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().max(0.0).sqrt()
    }

    pub fn argmax(&self) -> usize {
        self.probs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, &p)| if p > best.1 { (k, p) } else { best })
            .0
    }

    pub fn argmax_m(&self) -> f64 {
        self.m(self.argmax())
    }
}

/// `|⟨j, m along axis | s⟩|²` for every `m`.
///
/// The state is rotated so that `axis` becomes `ẑ`. Above `2j = 128` a state
/// with known orientation uses the rotated closed form instead, and
/// unstructured states beyond the dense rotation bound are refused.
pub fn measurement_distribution(s: &SpinState, axis: Direction) -> Result<MDistribution> {
    let j = s.j();
    if axis.is_north_pole() {
        return Ok(MDistribution { j, probs: s.probabilities() });
    }
    if axis.is_south_pole() {
        let mut probs = s.probabilities();
        probs.reverse();
        return Ok(MDistribution { j, probs });
    }
    if j.twice() > ALWAYS_ROTATE_LIMIT {
        if let Some(o) = s.orientation() {
            // eigenstate of J·n with eigenvalue j - q, seen from the axis frame
            let (tilt, q) = if 2 * o.q <= j.twice() {
                (o.axis.angle_to(&axis), o.q)
            } else {
                (std::f64::consts::PI - o.axis.angle_to(&axis), j.twice() - o.q)
            };
            let mut probs = almost_oriented_state(j, Direction::new(tilt, 0.0), q)?.probabilities();
            if 2 * o.q > j.twice() {
                probs.reverse();
            }
            return Ok(MDistribution { j, probs });
        }
        if j.twice() > DENSE_ROTATION_LIMIT {
            return Err(SpinError::Capacity {
                what: "measurement of an unstructured state along a tilted axis, 2j",
                limit: DENSE_ROTATION_LIMIT as usize,
                requested: j.twice() as usize,
            });
        }
    }
    let rotated = rotate_state(s, &EulerAngles::aligning(axis))?;
    Ok(MDistribution { j, probs: rotated.probabilities() })
}

/// Mean and variance of `J·axis`.
pub fn expectation_and_variance(s: &SpinState, axis: Direction) -> Result<(f64, f64)> {
    let d = measurement_distribution(s, axis)?;
    Ok((d.mean(), d.variance()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_core::{coherent_state, random_state};
    use std::f64::consts::PI;

    #[test]
    fn coherent_along_its_axis_is_sharp() {
        for twice in [1u32, 4, 13, 40] {
            let n = Direction::new(1.1, 2.3);
            let d = measurement_distribution(&coherent_state(HalfInt::from_twice(twice), n), n).unwrap();
            assert!((d.probs[twice as usize] - 1.0).abs() < 1e-12);
            assert!(d.variance().abs() < 1e-10 * twice as f64);
        }
    }

    #[test]
    fn basis_states_have_textbook_moments() {
        let j = HalfInt::from_int(6);
        for k in 0..j.dim() {
            let s = SpinState::basis(j, k).unwrap();
            let m = j.m_of_index(k);
            let (mean, var) = expectation_and_variance(&s, Direction::Z).unwrap();
            assert_eq!((mean, var), (m, 0.0));
            let (mean, var) = expectation_and_variance(&s, Direction::X).unwrap();
            assert!(mean.abs() < 1e-12);
            assert!((var - (42.0 - m * m) / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn south_pole_axis_reverses() {
        let s = coherent_state(HalfInt::from_int(3), Direction::new(0.5, 0.0));
        let up = measurement_distribution(&s, Direction::Z).unwrap();
        let down = measurement_distribution(&s, Direction::MINUS_Z).unwrap();
        assert!((up.mean() + down.mean()).abs() < 1e-14);
    }

    #[test]
    fn closed_form_path_matches_rotation_path() {
        // 2j = 400 is above the always-rotate limit but still dense-rotatable
        let j = HalfInt::from_int(200);
        let n = Direction::new(0.9, 0.4);
        let axis = Direction::new(2.0, 1.7);
        for q in [0u32, 2] {
            let s = almost_oriented_state(j, n, q).unwrap();
            let closed = measurement_distribution(&s, axis).unwrap();
            let untagged = SpinState::from_amplitudes(j, s.amplitudes()).unwrap();
            let rotated = measurement_distribution(&untagged, axis).unwrap();
            let diff: f64 = closed.probs.iter().zip(&rotated.probs).map(|(a, b)| (a - b).abs()).sum();
            assert!(diff < 1e-9, "q={q} diff={diff}");
        }
    }

    #[test]
    fn unstructured_large_states_are_refused_off_axis() {
        let s = random_state(HalfInt::from_twice(1100), 1);
        assert!(matches!(
            measurement_distribution(&s, Direction::X),
            Err(SpinError::Capacity { .. })
        ));
        assert!(measurement_distribution(&s, Direction::Z).is_ok());
    }

    #[test]
    fn distributions_sum_to_one() {
        let s = random_state(HalfInt::from_twice(31), 5);
        for axis in [Direction::Z, Direction::X, Direction::new(PI / 3.0, 1.0)] {
            let d = measurement_distribution(&s, axis).unwrap();
            assert!((d.total() - 1.0).abs() < 1e-10);
        }
    }
}
