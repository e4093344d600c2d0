//! Intensities `|Y_{ℓm}(θ)|²` of spherical harmonics and the equatorial
//! concentration of `|Y_{ℓℓ}|²` at large ℓ.
//!
//! The normalized associated Legendre functions are computed by the
//! standard upward recursion in ℓ, with an explicit power-of-e scale so that
//! `ℓ` up to 10⁶ neither overflows nor underflows.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, SpinError};
use crate::special::ln_factorial;

pub const MAX_L: u64 = 1_000_000;

fn check(l: u64, m: i64) -> Result<u64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(SpinError::domain(format!("|m| = {am} exceeds l = {l}")));
    }
    if l > MAX_L {
        return Err(SpinError::Capacity { what: "spherical harmonic degree", limit: MAX_L as usize, requested: l as usize });
    }
    Ok(am)
}

/// `ln(1 − x²)`, accurate near the equator where `ℓ ln(1 − x²)` must not
/// amplify rounding by `ℓ`.
fn ln_one_minus_sq(x: f64) -> f64 {
    if x.abs() < 0.5 {
        (-x * x).ln_1p()
    } else {
        ((1.0 - x) * (1.0 + x)).ln()
    }
}

/// `P̄_ℓ^m(x)` such that `|Y_{ℓm}|² = P̄²`, returned as `(sign·mantissa, ln scale)`
/// with value `mantissa·e^{scale}`. `m ≥ 0`.
pub fn normalized_legendre(l: u64, m: u64, x: f64) -> (f64, f64) {
    debug_assert!(m <= l);
    let ln_one_minus = ln_one_minus_sq(x);
    // log P̄_mm = ½[ln(2m+1) − ln 4π + ln (2m)! − 2m ln 2 − 2 ln m!] + (m/2) ln(1−x²)
    let mf = m as f64;
    let log_pmm = 0.5 * ((2.0 * mf + 1.0).ln() - (4.0 * PI).ln() + ln_factorial(2 * m) - 2.0 * mf * 2f64.ln() - 2.0 * ln_factorial(m))
        + if m == 0 { 0.0 } else { 0.5 * mf * ln_one_minus };
    // the Condon–Shortley sign is irrelevant to intensities and dropped
    if l == m {
        return (1.0, log_pmm);
    }
    if !log_pmm.is_finite() {
        return (0.0, 0.0);
    }
    let mut scale = log_pmm;
    let mut prev2 = 1.0; // P̄_{l-2}
    let mut prev1 = x * (2.0 * mf + 3.0).sqrt(); // P̄_{m+1,m}
    for ll in m + 2..=l {
        let lf = ll as f64;
        let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
        let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
        let next = a * (x * prev1 - b * prev2);
        prev2 = prev1;
        prev1 = next;
        let mag = prev1.abs().max(prev2.abs());
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            let s = mag.ln();
            prev1 /= mag;
            prev2 /= mag;
            scale += s;
        }
    }
    (prev1, scale)
}

/// `|Y_{ℓm}|²` at `x = cos θ`.
pub fn sph_harm_sq_at(l: u64, m: i64, x: f64) -> Result<f64> {
    let am = check(l, m)?;
    let (v, s) = normalized_legendre(l, am, x);
    Ok(if v == 0.0 { 0.0 } else { (2.0 * (v.abs().ln() + s)).exp() })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AngularProfile {
    pub l: u64,
    pub m: i64,
    pub cos_theta: Vec<f64>,
    pub intensity: Vec<f64>,
}

impl AngularProfile {
    /// `2π ∫ I d(cosθ)` by the trapezoid rule on the profile's own grid.
    pub fn trapezoid_norm(&self) -> f64 {
        let pairs = self.cos_theta.windows(2).zip(self.intensity.windows(2));
        2.0 * PI * pairs.map(|(x, y)| (x[1] - x[0]).abs() * 0.5 * (y[0] + y[1])).sum::<f64>()
    }

    pub fn argmax_cos_theta(&self) -> f64 {
        let k = self
            .intensity
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |b, (k, &v)| if v > b.1 { (k, v) } else { b })
            .0;
        self.cos_theta[k]
    }
}

/// `n` evenly spaced values of `cos θ` spanning `[−1, 1]`.
pub fn uniform_cos_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn sph_harm_sq(l: u64, m: i64, cos_theta: &[f64]) -> Result<AngularProfile> {
    check(l, m)?;
    let intensity = cos_theta.iter().map(|&x| sph_harm_sq_at(l, m, x)).collect::<Result<Vec<_>>>()?;
    Ok(AngularProfile { l, m, cos_theta: cos_theta.to_vec(), intensity })
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    // Below a few ulps of the panel value further splitting only chases rounding.
    let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
        left + right + delta / 15.0
    } else {
        simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
}

/// Adaptive Simpson quadrature over `panels` equal initial panels.
///
/// `tol` is relative to the magnitude of the integral (estimated from the
/// initial panels); keep it above the integrand's own rounding noise.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize, tol: f64) -> f64 {
    let h = (b - a) / panels as f64;
    let start: Vec<[f64; 5]> = (0..panels)
        .map(|i| {
            let (x0, x1) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (f0, fm, f1) = (f(x0), f(0.5 * (x0 + x1)), f(x1));
            [x0, x1, f0, fm, f1]
        })
        .collect();
    let coarse = |p: &[f64; 5]| h / 6.0 * (p[2] + 4.0 * p[3] + p[4]);
    let scale: f64 = start.iter().map(|p| coarse(p).abs()).sum();
    let panel_tol = tol * scale / panels as f64;
    start.iter().map(|p| simpson(f, p[0], p[1], p[2], p[3], p[4], coarse(p), panel_tol, 30)).sum()
}

/// Enough initial panels to resolve structure of width `~1/√ℓ`.
fn panels_for(l: u64) -> usize {
    64usize.max((16.0 * (2.0 * l as f64 + 3.0).sqrt()) as usize)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    (p0, p1) = (p1, ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf);
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

const NODES_PER_PANEL: usize = 16;

/// Visits quadrature nodes `(cos θ, weight)` for `∫_{−1}^{1} d(cos θ)`, using
/// panels uniform in `θ` so the oscillations of degree-`ℓ` harmonics are
/// evenly resolved right up to the poles.
fn for_each_cos_node(l: u64, mut visit: impl FnMut(f64, f64)) {
    let panels = (l as usize + 1).max(64);
    let rule = gauss_legendre(NODES_PER_PANEL);
    let h = PI / panels as f64;
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * h;
        for &(u, w) in &rule {
            let theta = mid + 0.5 * h * u;
            visit(theta.cos(), 0.5 * h * w * theta.sin());
        }
    }
}

/// `2π ∫_{−1}^{1} |Y_{ℓm}|² d(cosθ)`.
pub fn normalization(l: u64, m: i64) -> Result<f64> {
    check(l, m)?;
    let mut total = 0.0;
    for_each_cos_node(l, |x, w| total += w * sph_harm_sq_at(l, m, x).unwrap_or(0.0));
    Ok(2.0 * PI * total)
}

/// Probability that `|cos θ| < eps` in the state `|ℓ, ℓ⟩`.
pub fn concentration_fraction(l: u64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(SpinError::domain(format!("eps = {eps} must lie in (0, 1]")));
    }
    check(l, l as i64)?;
    let lf = l as f64;
    // (1 − x²)^ℓ up to a constant; the constant cancels in the ratio
    let f = |x: f64| if l == 0 { 1.0 } else { (lf * ln_one_minus_sq(x)).exp() };
    let panels = panels_for(l);
    let inside = integrate(&f, 0.0, eps, panels, 1e-12);
    let total = integrate(&f, 0.0, 1.0, panels, 1e-12);
    Ok((inside / total).min(1.0))
}

/// Mean and standard deviation of `cos θ` under `|Y_{ℓm}|²`.
pub fn cos_theta_moments(l: u64, m: i64) -> Result<(f64, f64)> {
    check(l, m)?;
    let (mut w0, mut w1, mut w2) = (0.0, 0.0, 0.0);
    for_each_cos_node(l, |x, w| {
        let v = w * sph_harm_sq_at(l, m, x).unwrap_or(0.0);
        w0 += v;
        w1 += v * x;
        w2 += v * x * x;
    });
    let mean = w1 / w0;
    Ok((mean, (w2 / w0 - mean * mean).max(0.0).sqrt()))
}

/// Sign changes of `P_ℓ^m` on `samples` interior points of `(−1, 1)`.
pub fn count_nodes(l: u64, m: i64, samples: usize) -> Result<usize> {
    let am = check(l, m)?;
    let mut last = 0.0f64;
    let mut count = 0;
    for i in 1..=samples {
        let x = -1.0 + 2.0 * i as f64 / (samples + 1) as f64;
        let v = normalized_legendre(l, am, x).0;
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
    }
    Ok(count)
}
