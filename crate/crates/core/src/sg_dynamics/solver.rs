//! Strang split-step (kinetic–potential–kinetic) propagation.
//!
//! Decoupled runs exploit that the potential depends on `z` only: the `y`
//! motion is free and factorizes exactly, so a low-rank initial field
//! `Σ_r a_r(y) b_r(z)` is evolved with 1D transforms. The coupled solver
//! works on the full mesh.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::sg_dynamics::field::{FieldConfig, Moments, SpinorField, TrajectoryRecord};
use crate::sg_dynamics::grid::{kinetic_phases, Fft1, Fft2, Grid2D};

type C64 = Complex64;

/// Beyond this rank, separable propagation costs more than the full mesh.
pub const MAX_SEPARABLE_RANK: usize = 32;
const RANK_TOLERANCE: f64 = 1e-13;
const NORM_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Separable when the initial field has low rank, full mesh otherwise.
    #[default]
    Auto,
    Separable,
    FullGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub dt: f64,
    pub steps: usize,
    /// Moments are recorded at step 0 and every `record_every` steps.
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default)]
    pub method: Method,
}

fn default_record_every() -> usize {
    10
}

impl RunSpec {
    pub fn new(dt: f64, steps: usize, record_every: usize) -> Self {
        RunSpec { dt, steps, record_every, method: Method::Auto }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    /// Step counts of successive segments between records.
    fn segments(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut left = self.steps;
        while left > 0 {
            let s = left.min(self.record_every);
            out.push(s);
            left -= s;
        }
        out
    }
}

fn validate(initial: &SpinorField, field: &FieldConfig, spec: &RunSpec) -> Result<()> {
    initial.grid.validate()?;
    field.validate()?;
    if !(spec.dt > 0.0 && spec.dt.is_finite()) {
        return Err(SpinError::config("dt must be positive"));
    }
    if spec.record_every == 0 {
        return Err(SpinError::config("record_every must be at least 1"));
    }
    let norm = initial.total_norm();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(SpinError::config(format!("initial spinor has norm {norm}, expected 1")));
    }
    // kinetic phase per step must stay below π
    let phase = initial.grid.k_max_sq() / (2.0 * field.mass) * spec.dt;
    if phase >= std::f64::consts::PI {
        return Err(SpinError::config(format!("dt = {} gives a kinetic phase of {phase:.3} ≥ π per step", spec.dt)));
    }
    Ok(())
}

/// Decoupled evolution: `ψ₁` under `V = −μb₀z`, `ψ₂` under `V = +μb₀z`.
pub fn evolve_decoupled(initial: &SpinorField, field: &FieldConfig, spec: &RunSpec) -> Result<(SpinorField, TrajectoryRecord)> {
    validate(initial, field, spec)?;
    field.check_decoupling(&initial.grid)?;
    let factors = match spec.method {
        Method::FullGrid => None,
        _ => [0, 1].map(|c| low_rank(&initial.grid, initial.component(c))).into_iter().collect::<Option<Vec<_>>>(),
    };
    match factors {
        Some(f) => Ok(run_separable(initial, field, spec, f)),
        None if spec.method == Method::Separable => {
            Err(SpinError::config(format!("initial field is not separable within rank {MAX_SEPARABLE_RANK}")))
        }
        None => Ok(run_full(initial, field, spec, false)),
    }
}

/// Full evolution in the rotating variables, keeping the coupling
/// `∓iμb₀y e^{∓2iμB₀t}` between the components.
pub fn evolve_coupled(initial: &SpinorField, field: &FieldConfig, spec: &RunSpec) -> Result<(SpinorField, TrajectoryRecord)> {
    validate(initial, field, spec)?;
    if spec.method == Method::Separable {
        return Err(SpinError::config("the coupled solver has no separable form"));
    }
    Ok(run_full(initial, field, spec, true))
}

// ---------------------------------------------------------------------------
// full mesh

fn run_full(initial: &SpinorField, field: &FieldConfig, spec: &RunSpec, coupled: bool) -> (SpinorField, TrajectoryRecord) {
    let g = initial.grid;
    let mut state = initial.clone();
    let mut fft = Fft2::new(&g);
    let mut record = TrajectoryRecord::default();
    record.push(state.time, state.moments(&mut fft));

    let (ky, kz) = (g.ky(), g.kz());
    let norm = 1.0 / g.len() as f64;
    let phases = |tau: f64| -> (Vec<C64>, Vec<C64>) {
        let mut pz = kinetic_phases(&kz, tau, field.mass);
        pz.iter_mut().for_each(|p| *p *= norm);
        (kinetic_phases(&ky, tau, field.mass), pz)
    };
    let half = phases(spec.dt / 2.0);
    let full = phases(spec.dt);

    let f = field.force();
    let zs = g.zs();
    let ys = g.ys();
    // diagonal potential phases e^{∓iV dt} for the uncoupled case
    let up_phase: Vec<C64> = zs.iter().map(|z| C64::from_polar(1.0, f * z * spec.dt)).collect();

    for seg in spec.segments() {
        for step in 0..seg {
            let kin = if step == 0 { &half } else { &full };
            kinetic(&mut fft, &mut state.psi1, kin);
            kinetic(&mut fft, &mut state.psi2, kin);
            let t_mid = state.time + (step as f64 + 0.5) * spec.dt;
            if coupled {
                coupled_potential(&mut state, &ys, &zs, f, field.larmor(), t_mid, spec.dt);
            } else {
                for row in 0..g.ny {
                    let r = row * g.nz..(row + 1) * g.nz;
                    for ((a, b), p) in state.psi1[r.clone()].iter_mut().zip(&mut state.psi2[r]).zip(&up_phase) {
                        *a *= p;
                        *b *= p.conj();
                    }
                }
            }
        }
        kinetic(&mut fft, &mut state.psi1, &half);
        kinetic(&mut fft, &mut state.psi2, &half);
        state.time += seg as f64 * spec.dt;
        record.push(state.time, state.moments(&mut fft));
    }
    (state, record)
}

fn kinetic(fft: &mut Fft2, psi: &mut [C64], (py, pz): &(Vec<C64>, Vec<C64>)) {
    fft.forward(psi);
    for (row, p) in fft.spectrum_mut().chunks_mut(py.len()).zip(pz) {
        for (v, q) in row.iter_mut().zip(py) {
            *v *= p * q;
        }
    }
    fft.inverse(psi);
}

/// One potential step with the coupling averaged over the step
/// (first-order Magnus): `∫ e^{−2iωt} dt = dt·sinc(ω dt)·e^{−2iω t_mid}`.
fn coupled_potential(state: &mut SpinorField, ys: &[f64], zs: &[f64], f: f64, omega: f64, t_mid: f64, dt: f64) {
    let x = omega * dt;
    let sinc = if x.abs() < 1e-8 { 1.0 } else { x.sin() / x };
    // off-diagonal H₁₂ = −i f y sinc e^{−2iω t_mid}
    let e = C64::new(0.0, -1.0) * C64::from_polar(sinc, -2.0 * omega * t_mid);
    let nz = zs.len();
    for (iy, &y) in ys.iter().enumerate() {
        let c = e * (f * y);
        let c2 = c.norm_sqr();
        let row = iy * nz..(iy + 1) * nz;
        for ((a, b), &z) in state.psi1[row.clone()].iter_mut().zip(&mut state.psi2[row]).zip(zs) {
            let d = -f * z; // H₁₁ = −H₂₂
            let h = (d * d + c2).sqrt();
            let (s, co) = (h * dt).sin_cos();
            let k = if h == 0.0 { dt } else { s / h };
            // exp(−i dt H) = cos(h dt) − i sin(h dt)/h · H
            let mi = C64::new(0.0, -k);
            let (a0, b0) = (*a, *b);
            *a = a0 * (co + mi * d) + b0 * (mi * c);
            *b = a0 * (mi * c.conj()) + b0 * (co - mi * d);
        }
    }
}

// ---------------------------------------------------------------------------
// separable

/// `ψ(y, z) ≈ Σ_r a_r(y) b_r(z)` by pivoted Gram–Schmidt on the rows;
/// `None` when the rank exceeds [`MAX_SEPARABLE_RANK`].
fn low_rank(g: &Grid2D, psi: &[C64]) -> Option<(Vec<Vec<C64>>, Vec<Vec<C64>>)> {
    let (ny, nz) = (g.ny, g.nz);
    let mut rest = psi.to_vec();
    let row_norm = |m: &[C64], r: usize| m[r * nz..(r + 1) * nz].iter().map(|v| v.norm_sqr()).sum::<f64>();
    let total: f64 = (0..ny).map(|r| row_norm(psi, r)).sum();
    let mut a_s = Vec::new();
    let mut b_s = Vec::new();
    if total == 0.0 {
        return Some((a_s, b_s));
    }
    loop {
        let residual: f64 = (0..ny).map(|r| row_norm(&rest, r)).sum();
        if residual <= RANK_TOLERANCE * RANK_TOLERANCE * total {
            return Some((a_s, b_s));
        }
        if a_s.len() == MAX_SEPARABLE_RANK {
            return None;
        }
        let pivot = (0..ny).max_by(|&p, &q| row_norm(&rest, p).total_cmp(&row_norm(&rest, q))).unwrap();
        let scale = row_norm(&rest, pivot).sqrt();
        let b: Vec<C64> = rest[pivot * nz..(pivot + 1) * nz].iter().map(|v| v / scale).collect();
        let mut a = vec![C64::new(0.0, 0.0); ny];
        for r in 0..ny {
            let row = &mut rest[r * nz..(r + 1) * nz];
            let coef: C64 = row.iter().zip(&b).map(|(v, w)| w.conj() * v).sum();
            row.iter_mut().zip(&b).for_each(|(v, w)| *v -= coef * w);
            a[r] = coef;
        }
        a_s.push(a);
        b_s.push(b);
    }
}

/// Gram-type sums `Σ_rs conj(u_r)·W·u_s` for diagonal weights.
fn weighted_gram(us: &[Vec<C64>], w: impl Fn(usize) -> f64) -> Vec<Vec<C64>> {
    us.iter()
        .map(|ur| us.iter().map(|us_| ur.iter().zip(us_).enumerate().map(|(i, (a, b))| a.conj() * b * w(i)).sum()).collect())
        .collect()
}

fn spectra(fft: &mut Fft1, us: &[Vec<C64>]) -> Vec<Vec<C64>> {
    us.iter()
        .map(|u| {
            let mut v = u.clone();
            fft.forward(&mut v);
            v
        })
        .collect()
}

/// Moments of `Σ_r a_r ⊗ b_r` from per-axis Gram matrices.
fn factored_moments(g: &Grid2D, fy: &mut Fft1, fz: &mut Fft1, a: &[Vec<C64>], b: &[Vec<C64>]) -> Moments {
    if a.is_empty() {
        return Moments::default();
    }
    let (ys, zs, ky, kz) = (g.ys(), g.zs(), g.ky(), g.kz());
    let (ah, bh) = (spectra(fy, a), spectra(fz, b));
    let ga = weighted_gram(a, |_| 1.0);
    let gb = weighted_gram(b, |_| 1.0);
    let ya = weighted_gram(a, |i| ys[i]);
    let zb = weighted_gram(b, |i| zs[i]);
    let sa = weighted_gram(&ah, |_| 1.0);
    let sb = weighted_gram(&bh, |_| 1.0);
    let ka = weighted_gram(&ah, |i| ky[i]);
    let kb = weighted_gram(&bh, |i| kz[i]);
    let contract = |x: &[Vec<C64>], y: &[Vec<C64>]| -> f64 {
        x.iter().zip(y).map(|(rx, ry)| rx.iter().zip(ry).map(|(p, q)| p * q).sum::<C64>()).sum::<C64>().re
    };
    let w = contract(&ga, &gb);
    let s = contract(&sa, &sb);
    Moments {
        norm: w * g.cell(),
        y: contract(&ya, &gb) / w,
        z: contract(&ga, &zb) / w,
        py: contract(&ka, &sb) / s,
        pz: contract(&sa, &kb) / s,
    }
}

fn run_separable(
    initial: &SpinorField,
    field: &FieldConfig,
    spec: &RunSpec,
    factors: Vec<(Vec<Vec<C64>>, Vec<Vec<C64>>)>,
) -> (SpinorField, TrajectoryRecord) {
    let g = initial.grid;
    let mut planner = FftPlanner::new();
    let mut fy = Fft1::new(&mut planner, g.ny);
    let mut fz = Fft1::new(&mut planner, g.nz);
    let (ky, kz) = (g.ky(), g.kz());
    let inv_nz = 1.0 / g.nz as f64;
    let zphases = |tau: f64| -> Vec<C64> { kinetic_phases(&kz, tau, field.mass).into_iter().map(|p| p * inv_nz).collect() };
    let (half, full) = (zphases(spec.dt / 2.0), zphases(spec.dt));
    let f = field.force();
    let up_phase: Vec<C64> = g.zs().iter().map(|z| C64::from_polar(1.0, f * z * spec.dt)).collect();

    let mut ys_factors: Vec<Vec<Vec<C64>>> = Vec::new();
    let mut zs_factors: Vec<Vec<Vec<C64>>> = Vec::new();
    for (a, b) in factors {
        ys_factors.push(a);
        zs_factors.push(b);
    }
    // free y motion: spectra kept from t = 0, phases applied on demand
    let y_spectra: Vec<Vec<Vec<C64>>> = ys_factors.iter().map(|a| spectra(&mut fy, a)).collect();
    let y_at = |fy: &mut Fft1, t: f64, c: usize| -> Vec<Vec<C64>> {
        let ph: Vec<C64> = kinetic_phases(&ky, t, field.mass).into_iter().map(|p| p / g.ny as f64).collect();
        y_spectra[c]
            .iter()
            .map(|s| {
                let mut v: Vec<C64> = s.iter().zip(&ph).map(|(a, p)| a * p).collect();
                fy.inverse(&mut v);
                v
            })
            .collect()
    };

    let mut record = TrajectoryRecord::default();
    let mut time = initial.time;
    let elapsed = |time: f64| time - initial.time;
    let moments = |fy: &mut Fft1, fz: &mut Fft1, zf: &[Vec<Vec<C64>>], t: f64| -> [Moments; 2] {
        [0, 1].map(|c| {
            let a = y_at(fy, t, c);
            factored_moments(&g, fy, fz, &a, &zf[c])
        })
    };
    record.push(time, moments(&mut fy, &mut fz, &zs_factors, 0.0));

    let kin = |fz: &mut Fft1, b: &mut Vec<C64>, ph: &[C64]| {
        fz.forward(b);
        b.iter_mut().zip(ph).for_each(|(v, p)| *v *= p);
        fz.inverse(b);
    };
    for seg in spec.segments() {
        for (c, comp) in zs_factors.iter_mut().enumerate() {
            for b in comp.iter_mut() {
                for step in 0..seg {
                    kin(&mut fz, b, if step == 0 { &half } else { &full });
                    if c == 0 {
                        b.iter_mut().zip(&up_phase).for_each(|(v, p)| *v *= p);
                    } else {
                        b.iter_mut().zip(&up_phase).for_each(|(v, p)| *v *= p.conj());
                    }
                }
                kin(&mut fz, b, &half);
            }
        }
        time += seg as f64 * spec.dt;
        record.push(time, moments(&mut fy, &mut fz, &zs_factors, elapsed(time)));
    }

    let mut out = SpinorField::zeros(g);
    out.time = time;
    for c in 0..2 {
        let a = y_at(&mut fy, elapsed(time), c);
        let target = if c == 0 { &mut out.psi1 } else { &mut out.psi2 };
        for (ar, br) in a.iter().zip(&zs_factors[c]) {
            for iy in 0..g.ny {
                let row = &mut target[iy * g.nz..(iy + 1) * g.nz];
                row.iter_mut().zip(br).for_each(|(v, b)| *v += ar[iy] * b);
            }
        }
    }
    (out, record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sg_dynamics::field::{spinor_along, PacketSpec};
    use crate::spin_core::Direction;

    fn setup(n: usize, l: f64) -> (Grid2D, SpinorField) {
        let g = Grid2D::new(n, n, l, l).unwrap();
        let f = SpinorField::gaussian(g, &PacketSpec::default(), spinor_along(Direction::X)).unwrap();
        (g, f)
    }

    #[test]
    fn separable_and_full_paths_agree() {
        let (g, init) = setup(64, 32.0);
        let field = FieldConfig::with_bias_ratio(1.0, 0.4, 1e3, &g);
        let spec = RunSpec::new(0.01, 200, 50);
        let (a, ra) = evolve_decoupled(&init, &field, &spec.with_method(Method::Separable)).unwrap();
        let (b, rb) = evolve_decoupled(&init, &field, &spec.with_method(Method::FullGrid)).unwrap();
        assert!((a.overlap(&b) - 1.0).abs() < 1e-10);
        for (x, y) in ra.up.iter().zip(&rb.up) {
            assert!((x.z - y.z).abs() < 1e-9 && (x.pz - y.pz).abs() < 1e-9 && (x.y - y.y).abs() < 1e-9);
        }
    }

    #[test]
    fn rank_detection() {
        let (g, init) = setup(32, 16.0);
        assert_eq!(low_rank(&g, &init.psi1).unwrap().0.len(), 1);
        let (g, _) = setup(64, 16.0);
        let noisy: Vec<C64> = (0..g.len()).map(|i| C64::new(((i * i) as f64 * 0.37).sin(), 0.0)).collect();
        assert!(low_rank(&g, &noisy).is_none());
    }

    #[test]
    fn rejects_bad_runs() {
        let (g, init) = setup(32, 16.0);
        let field = FieldConfig::with_bias_ratio(1.0, 0.4, 1e3, &g);
        assert!(evolve_decoupled(&init, &field, &RunSpec::new(1.0, 10, 1)).is_err()); // CFL
        let mut half = init.clone();
        half.psi1.iter_mut().for_each(|v| *v *= 0.5);
        assert!(evolve_decoupled(&half, &field, &RunSpec::new(0.01, 10, 1)).is_err());
        let weak = FieldConfig::new(1.0, 0.4, 1.0);
        assert!(evolve_decoupled(&init, &weak, &RunSpec::new(0.01, 10, 1)).is_err());
        assert!(evolve_coupled(&init, &weak, &RunSpec::new(0.01, 10, 1)).is_ok());
    }

    #[test]
    fn zero_gradient_coupled_run_transfers_nothing() {
        let (_, init) = setup(32, 16.0);
        let (_, r) = evolve_coupled(&init, &FieldConfig::new(1.0, 0.0, 0.0), &RunSpec::new(0.01, 50, 10)).unwrap();
        assert!(r.population_transfer() < 1e-14);
    }

    #[test]
    fn records_are_time_ordered() {
        let (g, init) = setup(32, 16.0);
        let field = FieldConfig::with_bias_ratio(1.0, 0.4, 1e3, &g);
        let (fin, r) = evolve_decoupled(&init, &field, &RunSpec::new(0.01, 25, 10)).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.times.windows(2).all(|w| w[1] > w[0]));
        assert!((fin.time - 0.25).abs() < 1e-12);
    }
}
