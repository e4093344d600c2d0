//! Large-j form of the coherent-state `J_z` distribution.
//!
//! With `n = 2j` and `x = k/n`, Stirling's formula turns `|c_k|²` into
//! `exp(n f(x))`, sharply peaked at `x₀ = cos²(θ/2)`.

use serde::Serialize;

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::spin_core::{coherent_state, Direction};

fn check_theta(theta: f64) -> Result<()> {
    if theta > 0.0 && theta < std::f64::consts::PI {
        Ok(())
    } else {
        Err(SpinError::domain(format!("θ = {theta} must lie strictly inside (0, π)")))
    }
}

/// `f(x) = −x ln x − (1−x) ln(1−x) + 2x ln cos(θ/2) + 2(1−x) ln sin(θ/2)`.
pub fn f_of_x(x: f64, theta: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(SpinError::domain(format!("x = {x} must lie strictly inside (0, 1)")));
    }
    check_theta(theta)?;
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    Ok(-x * x.ln() - (1.0 - x) * (1.0 - x).ln() + 2.0 * x * c.ln() + 2.0 * (1.0 - x) * s.ln())
}

/// `f''(x) = −1/(x(1−x))`, independent of θ.
pub fn f_second_derivative(x: f64) -> f64 {
    -1.0 / (x * (1.0 - x))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SaddlePoint {
    pub x0: f64,
    /// Peak of `J_z / j`, i.e. `cos θ`.
    pub jz_over_j: f64,
}

impl SaddlePoint {
    pub fn peak_jz(&self, j: HalfInt) -> f64 {
        j.value() * self.jz_over_j
    }
}

pub fn saddle_point(theta: f64) -> Result<SaddlePoint> {
    check_theta(theta)?;
    Ok(SaddlePoint { x0: (theta / 2.0).cos().powi(2), jz_over_j: theta.cos() })
}

/// Discrete profile over a uniform grid in `x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LargeNProfile {
    pub n: u32,
    pub theta: f64,
    pub x: Vec<f64>,
    /// `n f(x)` at each grid point.
    pub log_density: Vec<f64>,
    /// `exp(n f)` normalized by its discrete sum.
    pub probs: Vec<f64>,
}

impl LargeNProfile {
    pub fn argmax_x(&self) -> f64 {
        let k = self
            .probs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (k, &p)| if p > b.1 { (k, p) } else { b })
            .0;
        self.x[k]
    }

    pub fn grid_step(&self) -> f64 {
        if self.x.len() < 2 {
            1.0
        } else {
            1.0 / (self.x.len() - 1) as f64
        }
    }

    pub fn mean_x(&self) -> f64 {
        self.x.iter().zip(&self.probs).map(|(x, p)| x * p).sum()
    }

    pub fn std_x(&self) -> f64 {
        let mu = self.mean_x();
        self.x.iter().zip(&self.probs).map(|(x, p)| (x - mu).powi(2) * p).sum::<f64>().sqrt()
    }

    /// Probability carried by grid points with `|x − center| > radius`.
    pub fn mass_outside(&self, center: f64, radius: f64) -> f64 {
        self.x.iter().zip(&self.probs).filter(|(x, _)| (*x - center).abs() > radius).map(|(_, p)| p).sum()
    }
}

/// Interior-clamped uniform grid: `x_i = i/(size−1)` pulled into
/// `[1/(2n), 1 − 1/(2n)]`.
fn grid(n: u32, size: usize) -> Vec<f64> {
    let lo = 0.5 / n as f64;
    (0..size)
        .map(|i| if size == 1 { 0.5 } else { i as f64 / (size - 1) as f64 })
        .map(|x| x.clamp(lo, 1.0 - lo))
        .collect()
}

fn normalized(log_density: &[f64]) -> Vec<f64> {
    let peak = log_density.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = log_density.iter().map(|l| (l - peak).exp()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

/// Minimum multiplet for which the Stirling form is offered.
pub const MIN_TWICE_J: u32 = 100;

/// `exp(n f(x))` on `grid_size` points; with `grid_size = 2j + 1` the grid is
/// `x = k/2j`, aligned with the exact distribution.
pub fn approx_distribution(j: HalfInt, theta: f64, grid_size: usize) -> Result<LargeNProfile> {
    let n = j.twice();
    if n < MIN_TWICE_J {
        return Err(SpinError::domain(format!("the large-j form needs 2j ≥ {MIN_TWICE_J}, got {n}")));
    }
    if grid_size == 0 {
        return Err(SpinError::domain("grid must have at least one point"));
    }
    check_theta(theta)?;
    let x = grid(n, grid_size);
    let log_density = x.iter().map(|&x| f_of_x(x, theta).map(|f| n as f64 * f)).collect::<Result<Vec<_>>>()?;
    let probs = normalized(&log_density);
    Ok(LargeNProfile { n, theta, x, log_density, probs })
}

/// Quadratic expansion of `n f` about `x₀`: the Gaussian limit.
pub fn gaussian_limit(j: HalfInt, theta: f64, grid_size: usize) -> Result<LargeNProfile> {
    let mut p = approx_distribution(j, theta, grid_size)?;
    let x0 = saddle_point(theta)?.x0;
    let curv = f_second_derivative(x0);
    p.log_density = p.x.iter().map(|x| p.n as f64 * 0.5 * curv * (x - x0).powi(2)).collect();
    p.probs = normalized(&p.log_density);
    Ok(p)
}

/// `½ Σ |p_i − q_i|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(SpinError::domain(format!("length mismatch: {} vs {}", p.len(), q.len())));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Total variation between the exact coherent-state distribution and its
/// large-j form on the aligned grid.
pub fn exact_vs_approx_tv(j: HalfInt, theta: f64) -> Result<f64> {
    let approx = approx_distribution(j, theta, j.dim())?;
    let exact = coherent_state(j, Direction::new(theta, 0.0)).probabilities();
    tv_distance(&exact, &approx.probs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn f_vanishes_at_the_saddle() {
        for theta in [0.3, FRAC_PI_4, FRAC_PI_2, 2.5] {
            let x0 = saddle_point(theta).unwrap().x0;
            assert!(f_of_x(x0, theta).unwrap().abs() < 1e-15);
        }
        assert!(f_of_x(0.5, FRAC_PI_2).unwrap().abs() < 1e-16);
    }

    #[test]
    fn saddle_examples() {
        let s = saddle_point(FRAC_PI_2).unwrap();
        assert!((s.x0 - 0.5).abs() < 1e-15 && s.jz_over_j.abs() < 1e-15);
        let s = saddle_point(FRAC_PI_4).unwrap();
        assert!((s.x0 - 0.853_553_390_593_273_7).abs() < 1e-15);
        assert!((s.peak_jz(HalfInt::from_int(10)) - 10.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(1.0 - saddle_point(1e-6).unwrap().x0 < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(f_of_x(0.0, 1.0).is_err());
        assert!(f_of_x(1.0, 1.0).is_err());
        assert!(f_of_x(0.5, 0.0).is_err());
        assert!(saddle_point(PI).is_err());
        assert!(approx_distribution(HalfInt::from_int(10), 1.0, 21).is_err());
    }

    #[test]
    fn grid_is_clamped() {
        let p = approx_distribution(HalfInt::from_int(50), 1.0, 101).unwrap();
        assert_eq!(p.x[0], 0.005);
        assert_eq!(p.x[100], 0.995);
        assert!((p.probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.log_density.iter().all(|&l| l <= 1e-12));
    }

    #[test]
    fn gaussian_limit_tracks_stirling_form() {
        let j = HalfInt::from_int(10_000);
        let a = approx_distribution(j, 1.0, j.dim()).unwrap();
        let g = gaussian_limit(j, 1.0, j.dim()).unwrap();
        assert!(tv_distance(&a.probs, &g.probs).unwrap() < 0.01);
    }
}
