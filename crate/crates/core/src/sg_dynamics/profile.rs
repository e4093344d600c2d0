use serde::Serialize;

use crate::error::{Result, SpinError};
use crate::sg_dynamics::field::FieldConfig;
use crate::spin_core::SpinState;

/// `σ(t) = σ √(1 + (t/(2mσ²))²)`, the width of a freely spreading Gaussian
/// whose density has standard deviation `σ` at `t = 0` (`ħ = 1`).
pub fn free_width(sigma: f64, t: f64, mass: f64) -> f64 {
    sigma * (1.0 + (t / (2.0 * mass * sigma * sigma)).powi(2)).sqrt()
}

/// Detector-plane intensity of a spin-j beam in the semiclassical picture.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SgProfile {
    pub z: Vec<f64>,
    pub intensity: Vec<f64>,
    /// Displacement of the `m = j` channel.
    pub z_j: f64,
    pub sigma_t: f64,
}

impl SgProfile {
    pub fn mean(&self) -> f64 {
        let w: f64 = self.intensity.iter().sum();
        self.z.iter().zip(&self.intensity).map(|(z, i)| z * i).sum::<f64>() / w
    }

    pub fn std(&self) -> f64 {
        let w: f64 = self.intensity.iter().sum();
        let mu = self.mean();
        (self.z.iter().zip(&self.intensity).map(|(z, i)| (z - mu).powi(2) * i).sum::<f64>() / w).sqrt()
    }

    /// Strict local maxima whose height exceeds `rel` times the global maximum.
    pub fn peaks(&self, rel: f64) -> Vec<f64> {
        let top = self.intensity.iter().copied().fold(0.0, f64::max);
        (1..self.intensity.len().saturating_sub(1))
            .filter(|&i| {
                let v = self.intensity[i];
                v > rel * top && v > self.intensity[i - 1] && v >= self.intensity[i + 1]
            })
            .map(|i| self.z[i])
            .collect()
    }
}

/// `I(z) = Σ_m |c_m|² G_{σ(t)}(z − (m/j)·z_j(t))`, with `z_j = μb₀t²/2m`
/// the classical displacement of the fully polarized channel and a unit
/// initial packet width. The measured component is `J_z`, along the field.
pub fn large_spin_sg_profile(s: &SpinState, field: &FieldConfig, t: f64, z: &[f64]) -> Result<SgProfile> {
    field.validate()?;
    let j = s.j();
    if j.twice() == 0 {
        return Err(SpinError::domain("spin 0 is not deflected"));
    }
    let z_j = field.force() * t * t / (2.0 * field.mass);
    let sigma_t = free_width(1.0, t, field.mass);
    let probs = s.probabilities();
    let norm = 1.0 / (sigma_t * (2.0 * std::f64::consts::PI).sqrt());
    let mut intensity = vec![0.0; z.len()];
    let jv = j.value();
    for (k, &p) in probs.iter().enumerate() {
        if p < 1e-300 {
            continue;
        }
        let center = j.m_of_index(k) / jv * z_j;
        for (out, &zz) in intensity.iter_mut().zip(z) {
            let u = (zz - center) / sigma_t;
            if u.abs() < 40.0 {
                *out += p * norm * (-0.5 * u * u).exp();
            }
        }
    }
    Ok(SgProfile { z: z.to_vec(), intensity, z_j, sigma_t })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::HalfInt;
    use crate::spin_core::{coherent_state, Direction};

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn free_width_limits() {
        assert_eq!(free_width(1.0, 0.0, 1.0), 1.0);
        assert!((free_width(1.0, 200.0, 1.0) / 100.0 - 1.0).abs() < 1e-4);
    }

    #[test]
    fn small_spin_splits_into_resolved_subpackets() {
        let j = HalfInt::from_twice(13);
        let s = coherent_state(j, Direction::X);
        let field = FieldConfig::new(1.0, 10.0, 1e9);
        let p = large_spin_sg_profile(&s, &field, 4.0, &grid(-100.0, 100.0, 8001)).unwrap();
        assert_eq!(p.peaks(1e-4).len(), 14);
    }

    #[test]
    fn coherent_large_spin_is_single_peaked() {
        let j = HalfInt::from_int(1000);
        let s = coherent_state(j, Direction::new(std::f64::consts::FRAC_PI_4, 0.0));
        let field = FieldConfig::new(1.0, 100.0, 1e9);
        let p = large_spin_sg_profile(&s, &field, 4.0, &grid(-1000.0, 1000.0, 4001)).unwrap();
        let peaks = p.peaks(1e-3);
        assert_eq!(peaks.len(), 1);
        assert!((peaks[0] / p.z_j - 0.5f64.sqrt()).abs() < 0.01);
        assert!(p.std() / p.z_j < 0.05);
    }
}
