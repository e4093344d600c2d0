use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::special::{ln_binomial, log_sum_exp};
use crate::spin_core::Direction;

/// Above this `2j` constructors keep amplitudes as log-magnitude and phase.
pub const LOG_STORAGE_THRESHOLD: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StorageMode {
    Dense,
    LogPolar,
}

#[derive(Clone, Debug, PartialEq)]
enum Amplitudes {
    Dense(Vec<Complex64>),
    LogPolar { log_mag: Vec<f64>, phase: Vec<f64> },
}

/// Known eigen-structure of a state: it is the `J·n = j - q` eigenstate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orientation {
    pub axis: Direction,
    pub q: u32,
}

/// A normalized pure spin-j state over the `J_z` basis, index `k` ↔ `m = -j + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinState {
    j: HalfInt,
    amps: Amplitudes,
    orientation: Option<Orientation>,
}

impl SpinState {
    /// Normalizes the given amplitudes.
    pub fn from_amplitudes(j: HalfInt, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != j.dim() {
            return Err(SpinError::domain(format!(
                "spin {j} needs {} amplitudes, got {}",
                j.dim(),
                amplitudes.len()
            )));
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(SpinError::domain("amplitudes vanish or are not finite"));
        }
        let amps = amplitudes.into_iter().map(|c| c / norm).collect();
        Ok(SpinState { j, amps: Amplitudes::Dense(amps), orientation: None })
    }

    /// Normalizes in log space. `log_mag[k] = -inf` encodes a zero amplitude.
    pub fn from_log_polar(j: HalfInt, mut log_mag: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if log_mag.len() != j.dim() || phase.len() != j.dim() {
            return Err(SpinError::domain("log-polar vectors have the wrong length"));
        }
        let half_log_norm = 0.5 * log_sum_exp(log_mag.iter().map(|l| 2.0 * l));
        if !half_log_norm.is_finite() {
            return Err(SpinError::domain("amplitudes vanish or are not finite"));
        }
        for l in log_mag.iter_mut() {
            *l -= half_log_norm;
        }
        Ok(SpinState { j, amps: Amplitudes::LogPolar { log_mag, phase }, orientation: None })
    }

    /// The basis state `|j, m⟩` with `m = -j + k`.
    pub fn basis(j: HalfInt, k: usize) -> Result<Self> {
        if k >= j.dim() {
            return Err(SpinError::domain(format!("basis index {k} outside spin {j}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); j.dim()];
        amps[k] = Complex64::new(1.0, 0.0);
        let mut s = SpinState::from_amplitudes(j, amps)?;
        // |j, m⟩ is the J·ẑ = j - q eigenstate and the J·(-ẑ) = j - (2j - q) one
        let q = j.twice() - k as u32;
        s.orientation = Some(if 2 * q <= j.twice() {
            Orientation { axis: Direction::Z, q }
        } else {
            Orientation { axis: Direction::MINUS_Z, q: j.twice() - q }
        });
        Ok(s)
    }

    pub(crate) fn with_orientation(mut self, orientation: Option<Orientation>) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    pub fn storage_mode(&self) -> StorageMode {
        match self.amps {
            Amplitudes::Dense(_) => StorageMode::Dense,
            Amplitudes::LogPolar { .. } => StorageMode::LogPolar,
        }
    }

    pub fn orientation(&self) -> Option<Orientation> {
        self.orientation
    }

    /// Linear amplitudes; tiny log-mode values may underflow to zero.
    pub fn amplitudes(&self) -> Vec<Complex64> {
        match &self.amps {
            Amplitudes::Dense(a) => a.clone(),
            Amplitudes::LogPolar { log_mag, phase } => log_mag
                .iter()
                .zip(phase)
                .map(|(&l, &p)| Complex64::from_polar(l.exp(), p))
                .collect(),
        }
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        match &self.amps {
            Amplitudes::Dense(a) => a[k],
            Amplitudes::LogPolar { log_mag, phase } => Complex64::from_polar(log_mag[k].exp(), phase[k]),
        }
    }

    /// `ln|amplitude_k|`.
    pub fn log_magnitudes(&self) -> Vec<f64> {
        match &self.amps {
            Amplitudes::Dense(a) => a.iter().map(|c| c.norm().ln()).collect(),
            Amplitudes::LogPolar { log_mag, .. } => log_mag.clone(),
        }
    }

    /// `|amplitude_k|²` over the `J_z` basis.
    pub fn probabilities(&self) -> Vec<f64> {
        match &self.amps {
            Amplitudes::Dense(a) => a.iter().map(|c| c.norm_sqr()).collect(),
            Amplitudes::LogPolar { log_mag, .. } => log_mag.iter().map(|l| (2.0 * l).exp()).collect(),
        }
    }

    /// `Σ_k |amplitude_k|²`, evaluated in the storage domain.
    pub fn norm_sqr(&self) -> f64 {
        match &self.amps {
            Amplitudes::Dense(a) => a.iter().map(|c| c.norm_sqr()).sum(),
            Amplitudes::LogPolar { log_mag, .. } => log_sum_exp(log_mag.iter().map(|l| 2.0 * l)).exp(),
        }
    }

    pub fn to_dense(&self) -> SpinState {
        SpinState {
            j: self.j,
            amps: Amplitudes::Dense(self.amplitudes()),
            orientation: self.orientation,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SpinState) -> Result<Complex64> {
        if self.j != other.j {
            return Err(SpinError::domain("inner product of states with different j"));
        }
        let a = self.amplitudes();
        let b = other.amplitudes();
        Ok(a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum())
    }

    /// `|⟨self|other⟩|`, insensitive to global phase.
    pub fn fidelity(&self, other: &SpinState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }
}

/// The spin coherent state `|j, n⟩` with the phase convention
/// `c_k = C(2j,k)^½ e^{i(j-k)φ} cos(θ/2)^k sin(θ/2)^{2j-k}`.
pub fn coherent_state(j: HalfInt, n: Direction) -> SpinState {
    let orientation = Some(Orientation { axis: n, q: 0 });
    let last = j.twice() as usize;
    if n.is_north_pole() {
        return SpinState::basis(j, last).unwrap().with_orientation(orientation);
    }
    if n.is_south_pole() {
        return SpinState::basis(j, 0).unwrap().with_orientation(orientation);
    }
    let twice = j.twice() as u64;
    let (ls, lc) = ((n.theta() / 2.0).sin().ln(), (n.theta() / 2.0).cos().ln());
    let log_mag: Vec<f64> = (0..=twice)
        .map(|k| 0.5 * ln_binomial(twice, k) + k as f64 * lc + (twice - k) as f64 * ls)
        .collect();
    let phase: Vec<f64> = (0..=twice)
        .map(|k| 0.5 * (twice as f64 - 2.0 * k as f64) * n.phi())
        .collect();
    let state = SpinState::from_log_polar(j, log_mag, phase).expect("coherent amplitudes are finite");
    let state = if j.twice() > LOG_STORAGE_THRESHOLD { state } else { state.to_dense() };
    state.with_orientation(orientation)
}

/// Haar-random pure state: independent standard complex Gaussians, normalized.
pub fn random_state(j: HalfInt, seed: u64) -> SpinState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<Complex64> = (0..j.dim())
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    SpinState::from_amplitudes(j, amps).expect("gaussian draws are almost surely nonzero")
}

/// The `J·n = j - q` eigenstate, obtained by rotating `|j, m = j - q⟩` from `ẑ` to `n`.
pub fn almost_oriented_state(j: HalfInt, n: Direction, q: u32) -> Result<SpinState> {
    if q > j.twice() {
        return Err(SpinError::domain(format!("q = {q} exceeds 2j = {}", j.twice())));
    }
    if q == 0 {
        return Ok(coherent_state(j, n));
    }
    let to_n = crate::rotations::EulerAngles::aligning(n).spin_half().adjoint();
    let column = crate::rotations::log_polar_column(j, &to_n, (j.twice() - q) as usize);
    let (log_mag, phase): (Vec<f64>, Vec<f64>) = column.into_iter().unzip();
    let state = SpinState::from_log_polar(j, log_mag, phase)?;
    let state = if j.twice() > LOG_STORAGE_THRESHOLD { state } else { state.to_dense() };
    Ok(state.with_orientation(Some(Orientation { axis: n, q })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spin_half_matches_two_component_form() {
        let (theta, phi) = (1.2, 0.7);
        let s = coherent_state(HalfInt::HALF, Direction::new(theta, phi));
        let a = s.amplitudes();
        // k = 1 is spin up
        let up = Complex64::from_polar((theta / 2.0).cos(), -phi / 2.0);
        let down = Complex64::from_polar((theta / 2.0).sin(), phi / 2.0);
        assert!((a[1] - up).norm() < 1e-15);
        assert!((a[0] - down).norm() < 1e-15);
    }

    #[test]
    fn pole_collapses_to_basis_state() {
        let j = HalfInt::from_int(5);
        let s = coherent_state(j, Direction::new(0.0, 1.3));
        let p = s.probabilities();
        assert_eq!(p[10], 1.0);
        assert!(p[..10].iter().all(|&x| x == 0.0));
        let s = coherent_state(j, Direction::new(PI, 0.0));
        assert_eq!(s.probabilities()[0], 1.0);
    }

    #[test]
    fn equator_weights_are_binomial() {
        let s = coherent_state(HalfInt::from_twice(13), Direction::new(PI / 2.0, 0.0));
        let p = s.probabilities();
        assert!((p[6] - 1716.0 / 8192.0).abs() < 1e-14);
        assert!((p[0] - 1.0 / 8192.0).abs() < 1e-16);
    }

    #[test]
    fn storage_switches_above_threshold() {
        let n = Direction::new(0.8, 0.1);
        assert_eq!(coherent_state(HalfInt::from_twice(60), n).storage_mode(), StorageMode::Dense);
        let big = coherent_state(HalfInt::from_int(100_000), n);
        assert_eq!(big.storage_mode(), StorageMode::LogPolar);
        assert!((big.norm_sqr() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn normalization_across_regimes() {
        for twice in [1u32, 2, 13, 200, 2000] {
            for theta in [0.0, PI / 6.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI] {
                let s = coherent_state(HalfInt::from_twice(twice), Direction::new(theta, 0.3));
                assert!((s.norm_sqr() - 1.0).abs() < 1e-10, "2j={twice} θ={theta}");
            }
        }
    }

    #[test]
    fn random_states_are_normalized_and_deterministic() {
        let j = HalfInt::from_twice(7);
        let a = random_state(j, 11);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-10);
        assert_eq!(a, random_state(j, 11));
        assert_ne!(a, random_state(j, 12));
    }

    #[test]
    fn almost_oriented_rejects_large_q() {
        assert!(almost_oriented_state(HalfInt::from_int(1), Direction::Z, 3).is_err());
    }

    #[test]
    fn almost_oriented_at_pole_is_basis_state() {
        let j = HalfInt::from_int(100);
        let s = almost_oriented_state(j, Direction::Z, 1).unwrap();
        let p = s.probabilities();
        assert!((p[199] - 1.0).abs() < 1e-12);
        assert!(p.iter().enumerate().all(|(k, &x)| k == 199 || x < 1e-20));
    }

    #[test]
    fn q_zero_reduces_to_coherent() {
        let j = HalfInt::from_twice(9);
        let n = Direction::new(1.0, 2.0);
        let a = almost_oriented_state(j, n, 0).unwrap();
        assert!((a.fidelity(&coherent_state(j, n)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert!(SpinState::from_amplitudes(HalfInt::HALF, vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(SpinState::from_amplitudes(HalfInt::HALF, vec![Complex64::new(0.0, 0.0); 2]).is_err());
    }
}
