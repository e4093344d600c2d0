use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};

type C64 = Complex64;

/// Uniform periodic mesh on `[−L_y/2, L_y/2) × [−L_z/2, L_z/2)`.
/// Arrays are stored row-major in `y` with `z` contiguous.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid2D {
    pub ny: usize,
    pub nz: usize,
    pub y_extent: f64,
    pub z_extent: f64,
}

impl Grid2D {
    pub fn new(ny: usize, nz: usize, y_extent: f64, z_extent: f64) -> Result<Self> {
        let g = Grid2D { ny, nz, y_extent, z_extent };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ny < 2 || self.nz < 2 {
            return Err(SpinError::config(format!("grid needs at least 2×2 points, got {}×{}", self.ny, self.nz)));
        }
        if !(self.y_extent > 0.0 && self.z_extent > 0.0 && self.y_extent.is_finite() && self.z_extent.is_finite()) {
            return Err(SpinError::config("grid extents must be positive and finite"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dy(&self) -> f64 {
        self.y_extent / self.ny as f64
    }

    pub fn dz(&self) -> f64 {
        self.z_extent / self.nz as f64
    }

    pub fn cell(&self) -> f64 {
        self.dy() * self.dz()
    }

    pub fn y_half(&self) -> f64 {
        self.y_extent / 2.0
    }

    pub fn y(&self, i: usize) -> f64 {
        -self.y_extent / 2.0 + i as f64 * self.dy()
    }

    pub fn z(&self, i: usize) -> f64 {
        -self.z_extent / 2.0 + i as f64 * self.dz()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.ny).map(|i| self.y(i)).collect()
    }

    pub fn zs(&self) -> Vec<f64> {
        (0..self.nz).map(|i| self.z(i)).collect()
    }

    pub fn ky(&self) -> Vec<f64> {
        wavenumbers(self.ny, self.y_extent)
    }

    pub fn kz(&self) -> Vec<f64> {
        wavenumbers(self.nz, self.z_extent)
    }

    /// `k_y,max² + k_z,max²`, the largest kinetic wavenumber squared.
    pub fn k_max_sq(&self) -> f64 {
        let m = |v: Vec<f64>| v.into_iter().map(|k| k * k).fold(0.0, f64::max);
        m(self.ky()) + m(self.kz())
    }
}

/// Angular wavenumbers in FFT order.
pub fn wavenumbers(n: usize, extent: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let m = if i <= (n - 1) / 2 { i as f64 } else { i as f64 - n as f64 };
            TAU * m / extent
        })
        .collect()
}

/// `e^{−i k² τ / 2m}` for each wavenumber.
pub fn kinetic_phases(k: &[f64], tau: f64, mass: f64) -> Vec<C64> {
    k.iter().map(|k| C64::from_polar(1.0, -k * k * tau / (2.0 * mass))).collect()
}

/// Forward and inverse 1D transforms of one length, with private scratch.
pub struct Fft1 {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch: Vec<C64>,
}

impl Fft1 {
    pub fn new(planner: &mut FftPlanner<f64>, n: usize) -> Self {
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let len = fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len());
        Fft1 { fwd, inv, scratch: vec![C64::new(0.0, 0.0); len] }
    }

    /// Unnormalized forward transform of every contiguous chunk.
    pub fn forward(&mut self, data: &mut [C64]) {
        self.fwd.process_with_scratch(data, &mut self.scratch);
    }

    /// Unnormalized inverse transform of every contiguous chunk.
    pub fn inverse(&mut self, data: &mut [C64]) {
        self.inv.process_with_scratch(data, &mut self.scratch);
    }
}

const TILE: usize = 32;

/// `dst[c·rows + r] = src[r·cols + c]`.
pub fn transpose(src: &[C64], dst: &mut [C64], rows: usize, cols: usize) {
    for r0 in (0..rows).step_by(TILE) {
        for c0 in (0..cols).step_by(TILE) {
            for r in r0..(r0 + TILE).min(rows) {
                for c in c0..(c0 + TILE).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// 2D transforms on the grid layout. The intermediate spectral layout is
/// transposed (`k_z` major, `k_y` contiguous) to save two transposes.
pub struct Fft2 {
    ny: usize,
    nz: usize,
    fy: Fft1,
    fz: Fft1,
    buf: Vec<C64>,
}

impl Fft2 {
    pub fn new(grid: &Grid2D) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            ny: grid.ny,
            nz: grid.nz,
            fy: Fft1::new(&mut planner, grid.ny),
            fz: Fft1::new(&mut planner, grid.nz),
            buf: vec![C64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Position data → spectrum in transposed layout, left in `self.spectrum()`.
    pub fn forward(&mut self, data: &mut [C64]) {
        self.fz.forward(data);
        transpose(data, &mut self.buf, self.ny, self.nz);
        self.fy.forward(&mut self.buf);
    }

    /// Transposed spectrum in `self.spectrum_mut()` → position data (unnormalized).
    pub fn inverse(&mut self, data: &mut [C64]) {
        self.fy.inverse(&mut self.buf);
        transpose(&self.buf, data, self.nz, self.ny);
        self.fz.inverse(data);
    }

    pub fn spectrum(&self) -> &[C64] {
        &self.buf
    }

    pub fn spectrum_mut(&mut self) -> &mut [C64] {
        &mut self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_follow_fft_order() {
        let k = wavenumbers(4, TAU);
        assert_eq!(k, vec![0.0, 1.0, -2.0, -1.0]);
        let k = wavenumbers(5, TAU);
        assert_eq!(k, vec![0.0, 1.0, 2.0, -2.0, -1.0]);
    }

    #[test]
    fn transpose_round_trip() {
        let src: Vec<C64> = (0..35 * 70).map(|i| C64::new(i as f64, -(i as f64))).collect();
        let mut t = vec![C64::new(0.0, 0.0); src.len()];
        let mut back = t.clone();
        transpose(&src, &mut t, 35, 70);
        assert_eq!(t[3 * 35 + 2], src[2 * 70 + 3]);
        transpose(&t, &mut back, 70, 35);
        assert_eq!(back, src);
    }

    #[test]
    fn fft2_round_trip() {
        let g = Grid2D::new(6, 10, 1.0, 2.0).unwrap();
        let orig: Vec<C64> = (0..60).map(|i| C64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut data = orig.clone();
        let mut f = Fft2::new(&g);
        f.forward(&mut data);
        f.inverse(&mut data);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / 60.0 - b).norm() < 1e-14);
        }
    }

    #[test]
    fn grid_rejects_degenerate_input() {
        assert!(Grid2D::new(1, 8, 1.0, 1.0).is_err());
        assert!(Grid2D::new(8, 8, 0.0, 1.0).is_err());
    }
}
