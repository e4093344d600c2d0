use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::sg_dynamics::grid::{Fft2, Grid2D};
use crate::spin_core::{coherent_state, Direction};
use crate::halfint::HalfInt;

type C64 = Complex64;

/// How the dimensionless solver units map to physical ones. With `ħ = 1`,
/// mass unit `m` and length unit `σ`, time is measured in `mσ²/ħ` and force
/// in `ħ²/(mσ³)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRecord {
    /// Physical packet width represented by one length unit, in metres.
    pub length_unit_m: f64,
    /// Physical particle mass represented by one mass unit, in kilograms.
    pub mass_unit_kg: f64,
}

const HBAR: f64 = 1.054_571_817e-34;

impl ScalingRecord {
    pub fn time_unit_s(&self) -> f64 {
        self.mass_unit_kg * self.length_unit_m.powi(2) / HBAR
    }

    pub fn force_unit_n(&self) -> f64 {
        HBAR * HBAR / (self.mass_unit_kg * self.length_unit_m.powi(3))
    }
}

impl Default for ScalingRecord {
    /// A silver atom with a one-micron packet.
    fn default() -> Self {
        ScalingRecord { length_unit_m: 1e-6, mass_unit_kg: 1.79e-25 }
    }
}

pub const DEFAULT_DECOUPLING_THRESHOLD: f64 = 1e3;

/// `B = (0, −b₀y, B₀ + b₀z)` acting on a moment `μ`, in solver units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldConfig {
    /// Uniform bias `B₀`.
    pub bias: f64,
    /// Gradient `b₀`.
    pub gradient: f64,
    pub mu: f64,
    pub mass: f64,
    /// Minimum `|B₀| / (|b₀|·y_half)` for which the decoupled equations are accepted.
    pub decoupling_threshold: f64,
    pub scaling: ScalingRecord,
}

impl FieldConfig {
    pub fn new(mu: f64, gradient: f64, bias: f64) -> Self {
        FieldConfig {
            bias,
            gradient,
            mu,
            mass: 1.0,
            decoupling_threshold: DEFAULT_DECOUPLING_THRESHOLD,
            scaling: ScalingRecord::default(),
        }
    }

    /// A field whose bias sits exactly `ratio` times above `|b₀|·y_half`.
    pub fn with_bias_ratio(mu: f64, gradient: f64, ratio: f64, grid: &Grid2D) -> Self {
        FieldConfig::new(mu, gradient, ratio * gradient.abs() * grid.y_half())
    }

    /// `μb₀`, the magnitude of the force on each spin component.
    pub fn force(&self) -> f64 {
        self.mu * self.gradient
    }

    /// `μB₀`; the coupling oscillates at twice this rate.
    pub fn larmor(&self) -> f64 {
        self.mu * self.bias
    }

    pub fn bias_ratio(&self, grid: &Grid2D) -> f64 {
        let scale = self.gradient.abs() * grid.y_half();
        if scale == 0.0 {
            f64::INFINITY
        } else {
            self.bias.abs() / scale
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.bias, self.gradient, self.mu, self.mass, self.decoupling_threshold];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(SpinError::config("field parameters must be finite"));
        }
        if self.mass <= 0.0 {
            return Err(SpinError::config("mass must be positive"));
        }
        Ok(())
    }

    pub fn check_decoupling(&self, grid: &Grid2D) -> Result<()> {
        let r = self.bias_ratio(grid);
        // a ratio set exactly at the threshold must not fail on rounding
        if r < self.decoupling_threshold * (1.0 - 1e-12) {
            return Err(SpinError::config(format!(
                "decoupled equations need |B0|/(|b0| y_half) ≥ {}, got {r:.3e}",
                self.decoupling_threshold
            )));
        }
        Ok(())
    }
}

/// Initial Gaussian packet, `|ψ|² ∝ exp(−(y−y₀)²/2σ_y² − (z−z₀)²/2σ_z²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PacketSpec {
    pub y0: f64,
    pub z0: f64,
    pub sigma_y: f64,
    pub sigma_z: f64,
    pub py0: f64,
    pub pz0: f64,
}

impl Default for PacketSpec {
    fn default() -> Self {
        PacketSpec { y0: 0.0, z0: 0.0, sigma_y: 1.0, sigma_z: 1.0, py0: 0.0, pz0: 0.0 }
    }
}

impl PacketSpec {
    pub fn amplitude(&self, y: f64, z: f64) -> C64 {
        let r = -(y - self.y0).powi(2) / (4.0 * self.sigma_y.powi(2)) - (z - self.z0).powi(2) / (4.0 * self.sigma_z.powi(2));
        C64::from_polar(r.exp(), self.py0 * y + self.pz0 * z)
    }
}

/// Two-component wavefunction on the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField {
    pub grid: Grid2D,
    pub psi1: Vec<C64>,
    pub psi2: Vec<C64>,
    pub time: f64,
}

/// `(up, down)` amplitudes of the spin-½ coherent state along `n`.
pub fn spinor_along(n: Direction) -> [C64; 2] {
    let s = coherent_state(HalfInt::HALF, n);
    [s.amplitude(1), s.amplitude(0)]
}

impl SpinorField {
    pub fn zeros(grid: Grid2D) -> Self {
        let z = vec![C64::new(0.0, 0.0); grid.len()];
        SpinorField { grid, psi1: z.clone(), psi2: z, time: 0.0 }
    }

    /// Product of a normalized Gaussian packet and a fixed spinor.
    pub fn gaussian(grid: Grid2D, packet: &PacketSpec, spinor: [C64; 2]) -> Result<Self> {
        grid.validate()?;
        let mut f = SpinorField::zeros(grid);
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let a = packet.amplitude(grid.y(iy), grid.z(iz));
                f.psi1[iy * grid.nz + iz] = a * spinor[0];
                f.psi2[iy * grid.nz + iz] = a * spinor[1];
            }
        }
        let n = f.total_norm();
        if n == 0.0 || !n.is_finite() {
            return Err(SpinError::config("initial packet does not fit on the grid"));
        }
        let s = 1.0 / n.sqrt();
        f.psi1.iter_mut().chain(f.psi2.iter_mut()).for_each(|v| *v *= s);
        Ok(f)
    }

    pub fn component(&self, c: usize) -> &[C64] {
        if c == 0 {
            &self.psi1
        } else {
            &self.psi2
        }
    }

    pub fn norm(&self, c: usize) -> f64 {
        self.component(c).iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell()
    }

    pub fn total_norm(&self) -> f64 {
        self.norm(0) + self.norm(1)
    }

    /// `⟨ψ₁|ψ₂⟩` on the grid.
    pub fn cross_overlap(&self) -> C64 {
        self.psi1.iter().zip(&self.psi2).map(|(a, b)| a.conj() * b).sum::<C64>() * self.grid.cell()
    }

    /// `|⟨ψ₁|ψ₂⟩| / (‖ψ₁‖‖ψ₂‖)`: 1 when both components share one spatial
    /// wavefunction, small once they are spatially distinguishable.
    pub fn spin_coherence(&self) -> f64 {
        let d = (self.norm(0) * self.norm(1)).sqrt();
        if d == 0.0 {
            0.0
        } else {
            self.cross_overlap().norm() / d
        }
    }

    /// `|⟨other|self⟩|` over both components.
    pub fn overlap(&self, other: &SpinorField) -> f64 {
        let s: C64 = other
            .psi1
            .iter()
            .zip(&self.psi1)
            .chain(other.psi2.iter().zip(&self.psi2))
            .map(|(a, b)| a.conj() * b)
            .sum();
        s.norm() * self.grid.cell()
    }

    /// `Θ = iσ_y K`: `(ψ₁, ψ₂) ↦ (ψ₂*, −ψ₁*)`. Reverses every momentum and
    /// flips the spin.
    pub fn time_reversed(&self) -> SpinorField {
        SpinorField {
            grid: self.grid,
            psi1: self.psi2.iter().map(|v| v.conj()).collect(),
            psi2: self.psi1.iter().map(|v| -v.conj()).collect(),
            time: self.time,
        }
    }

    /// Probability density `|ψ₁|² + |ψ₂|²` integrated over `y`.
    pub fn z_density(&self) -> Vec<f64> {
        let g = &self.grid;
        (0..g.nz)
            .map(|iz| {
                (0..g.ny).map(|iy| self.psi1[iy * g.nz + iz].norm_sqr() + self.psi2[iy * g.nz + iz].norm_sqr()).sum::<f64>() * g.dy()
            })
            .collect()
    }

    pub(crate) fn moments(&self, fft: &mut Fft2) -> [Moments; 2] {
        [0, 1].map(|c| Moments::of_grid(&self.grid, self.component(c), fft))
    }
}

/// Norm and conditional expectations of one component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Moments {
    pub norm: f64,
    pub y: f64,
    pub z: f64,
    pub py: f64,
    pub pz: f64,
}

impl Moments {
    pub(crate) fn of_grid(grid: &Grid2D, psi: &[C64], fft: &mut Fft2) -> Moments {
        let (ys, zs) = (grid.ys(), grid.zs());
        let (mut w, mut wy, mut wz) = (0.0, 0.0, 0.0);
        for iy in 0..grid.ny {
            for iz in 0..grid.nz {
                let p = psi[iy * grid.nz + iz].norm_sqr();
                w += p;
                wy += p * ys[iy];
                wz += p * zs[iz];
            }
        }
        if w == 0.0 {
            return Moments::default();
        }
        let mut work = psi.to_vec();
        fft.forward(&mut work);
        // transposed spectrum: k_z major, k_y contiguous
        let (ky, kz) = (grid.ky(), grid.kz());
        let (mut s, mut sy, mut sz) = (0.0, 0.0, 0.0);
        for (iz, row) in fft.spectrum().chunks(grid.ny).enumerate() {
            for (iy, v) in row.iter().enumerate() {
                let p = v.norm_sqr();
                s += p;
                sy += p * ky[iy];
                sz += p * kz[iz];
            }
        }
        Moments { norm: w * grid.cell(), y: wy / w, z: wz / w, py: sy / s, pz: sz / s }
    }
}

/// Per-component moments sampled at increasing times.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub up: Vec<Moments>,
    pub down: Vec<Moments>,
}

impl TrajectoryRecord {
    pub(crate) fn push(&mut self, t: f64, m: [Moments; 2]) {
        self.times.push(t);
        self.up.push(m[0]);
        self.down.push(m[1]);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, c: usize) -> &[Moments] {
        if c == 0 {
            &self.up
        } else {
            &self.down
        }
    }

    /// Largest change of the up-component norm from its initial value.
    pub fn population_transfer(&self) -> f64 {
        let Some(first) = self.up.first() else { return 0.0 };
        self.up.iter().map(|m| (m.norm - first.norm).abs()).fold(0.0, f64::max)
    }

    pub fn max_norm_drift(&self) -> f64 {
        let total = |i: usize| self.up[i].norm + self.down[i].norm;
        (0..self.len()).map(|i| (total(i) - total(0)).abs()).fold(0.0, f64::max)
    }

    pub fn max_component_norm_drift(&self) -> f64 {
        let d = |s: &[Moments]| s.iter().map(|m| (m.norm - s[0].norm).abs()).fold(0.0, f64::max);
        if self.is_empty() {
            0.0
        } else {
            d(&self.up).max(d(&self.down))
        }
    }

    /// Least-squares slope of `⟨p_z⟩(t)` for one component.
    pub fn pz_slope(&self, c: usize) -> f64 {
        let ys: Vec<f64> = self.series(c).iter().map(|m| m.pz).collect();
        least_squares_slope(&self.times, &ys)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "t", "norm_up", "y_up", "z_up", "py_up", "pz_up", "norm_down", "y_down", "z_down", "py_down", "pz_down",
        ])
        .map_err(io_err)?;
        for i in 0..self.len() {
            let (u, d) = (self.up[i], self.down[i]);
            let row = [self.times[i], u.norm, u.y, u.z, u.py, u.pz, d.norm, d.y, d.z, d.py, d.pz];
            out.write_record(row.iter().map(|v| format!("{v:.11e}"))).map_err(io_err)?;
        }
        out.flush().map_err(|e| SpinError::Numeric(format!("write failed: {e}")))?;
        Ok(())
    }
}

fn io_err(e: csv::Error) -> SpinError {
    SpinError::Numeric(format!("write failed: {e}"))
}

pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_is_normalized_with_spinor_weights() {
        let g = Grid2D::new(64, 64, 20.0, 20.0).unwrap();
        let f = SpinorField::gaussian(g, &PacketSpec::default(), spinor_along(Direction::X)).unwrap();
        assert!((f.total_norm() - 1.0).abs() < 1e-12);
        assert!((f.norm(0) - 0.5).abs() < 1e-12);
        assert!((f.spin_coherence() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments_of_moving_packet() {
        let g = Grid2D::new(64, 128, 20.0, 40.0).unwrap();
        let p = PacketSpec { y0: 1.0, z0: -2.0, pz0: 1.5, py0: -0.5, ..Default::default() };
        let f = SpinorField::gaussian(g, &p, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let [up, down] = f.moments(&mut Fft2::new(&g));
        assert!((up.y - 1.0).abs() < 1e-10 && (up.z + 2.0).abs() < 1e-10);
        assert!((up.py + 0.5).abs() < 1e-10 && (up.pz - 1.5).abs() < 1e-10);
        assert_eq!(down, Moments::default());
    }

    #[test]
    fn time_reversal_is_antiunitary_involution_up_to_sign() {
        let g = Grid2D::new(16, 16, 10.0, 10.0).unwrap();
        let f = SpinorField::gaussian(g, &PacketSpec { pz0: 1.0, ..Default::default() }, spinor_along(Direction::new(1.0, 0.5))).unwrap();
        let back = f.time_reversed().time_reversed();
        for (a, b) in back.psi1.iter().zip(&f.psi1) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn decoupling_guard() {
        let g = Grid2D::new(8, 8, 80.0, 80.0).unwrap();
        let ok = FieldConfig::with_bias_ratio(1.0, 0.5, 1e3, &g);
        assert!(ok.check_decoupling(&g).is_ok());
        assert!(FieldConfig::new(1.0, 0.5, 10.0).check_decoupling(&g).is_err());
        assert!(FieldConfig::new(1.0, 0.0, 0.0).check_decoupling(&g).is_ok());
    }

    #[test]
    fn scaling_units() {
        let s = ScalingRecord { length_unit_m: 1.0, mass_unit_kg: HBAR };
        assert!((s.time_unit_s() - 1.0).abs() < 1e-12);
        assert!((s.force_unit_n() - HBAR).abs() < 1e-40);
    }
}
