//! Stellar representation: a spin-j state as 2j unordered points on the
//! extended complex plane (equivalently, on the sphere).
//!
//! Two conventions are supported. [`StellarConvention::Doubled`] builds the
//! polynomial from squared amplitudes, so a coherent state along `n` has all
//! of its stars at `w_n²`; it fixes the state only up to the sign of each
//! amplitude. [`StellarConvention::Majorana`] weights amplitudes by
//! `√C(2j,k)`, puts the stars of a coherent state at `w_n` itself and is
//! invertible up to a global phase.

mod matching;
pub mod roots;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::special::ln_binomial;
use crate::spin_core::{Direction, SpinState};

pub use matching::min_cost_assignment;
pub use roots::{chordal, polynomial_roots, sphere_point};

type C64 = Complex64;

/// Largest `2j` accepted by [`state_to_stars`].
pub const STELLAR_LIMIT: u32 = 512;

/// A point of the extended complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Star {
    Finite(C64),
    Infinity,
}

impl Star {
    pub fn finite(&self) -> Option<C64> {
        match self {
            Star::Finite(w) => Some(*w),
            Star::Infinity => None,
        }
    }

    pub fn sphere_point(&self) -> [f64; 3] {
        match self {
            Star::Finite(w) => sphere_point(*w),
            Star::Infinity => [0.0, 0.0, 1.0],
        }
    }

    pub fn chordal(&self, other: &Star) -> f64 {
        let (p, q) = (self.sphere_point(), other.sphere_point());
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
    }

    /// The star obtained by squaring, i.e. the doubled image of `w`.
    pub fn squared(&self) -> Star {
        match self {
            Star::Finite(w) => Star::Finite(w * w),
            Star::Infinity => Star::Infinity,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum StellarConvention {
    /// Coefficients are squared amplitudes; coherent stars sit at `w²`.
    #[default]
    Doubled,
    /// Coefficients are `√C(2j,k)` times amplitudes; coherent stars sit at `w`.
    Majorana,
}

/// Unordered multiset of `2j` stars.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StarConfig {
    stars: Vec<Star>,
}

impl StarConfig {
    pub fn new(stars: Vec<Star>) -> Self {
        StarConfig { stars }
    }

    pub fn stars(&self) -> &[Star] {
        &self.stars
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(self.stars.len() as u32)
    }

    pub fn infinite_count(&self) -> usize {
        self.stars.iter().filter(|s| matches!(s, Star::Infinity)).count()
    }

    /// Largest chordal distance of any star from `center`.
    pub fn spread_about(&self, center: &Star) -> f64 {
        self.stars.iter().map(|s| s.chordal(center)).fold(0.0, f64::max)
    }

    /// Largest chordal distance from the (normalized) mean sphere point.
    pub fn cluster_radius(&self) -> f64 {
        if self.stars.is_empty() {
            return 0.0;
        }
        let mut c = [0.0; 3];
        for s in &self.stars {
            let p = s.sphere_point();
            (0..3).for_each(|i| c[i] += p[i]);
        }
        let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        if norm == 0.0 {
            return 2.0;
        }
        self.stars
            .iter()
            .map(|s| {
                let p = s.sphere_point();
                (0..3).map(|i| (p[i] - c[i] / norm).powi(2)).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Smallest chordal distance between two stars.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (a, s) in self.stars.iter().enumerate() {
            for t in &self.stars[a + 1..] {
                best = best.min(s.chordal(t));
            }
        }
        best
    }

    /// Largest pair distance under the optimal one-to-one pairing with
    /// `other`; infinite if the counts differ.
    pub fn matching_distance(&self, other: &StarConfig) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let cost: Vec<Vec<f64>> =
            self.stars.iter().map(|a| other.stars.iter().map(|b| a.chordal(b)).collect()).collect();
        min_cost_assignment(&cost).iter().enumerate().map(|(r, &c)| cost[r][c]).fold(0.0, f64::max)
    }

    /// Multiset equality with pairing tolerance (chordal metric).
    pub fn approx_eq(&self, other: &StarConfig, tol: f64) -> bool {
        self.matching_distance(other) <= tol
    }
}

/// `w = e^{iφ} / tan(θ/2)`; the north pole maps to infinity.
pub fn stereographic(n: Direction) -> Star {
    if n.is_north_pole() {
        return Star::Infinity;
    }
    C64::from_polar(1.0 / (n.theta() / 2.0).tan(), n.phi()).into()
}

impl From<C64> for Star {
    fn from(w: C64) -> Self {
        if w.is_finite() {
            Star::Finite(w)
        } else {
            Star::Infinity
        }
    }
}

/// `θ = 2 arctan(1/|w|)`, `φ = arg w`; infinity maps to the north pole.
pub fn inverse_stereographic(w: Star) -> Direction {
    match w {
        Star::Infinity => Direction::Z,
        Star::Finite(w) => {
            let r = w.norm();
            let theta = 2.0 * (1.0 / r).atan();
            let phi = if r == 0.0 { 0.0 } else { w.arg() };
            Direction::new(theta, phi)
        }
    }
}

/// `g_k`, the convention-dependent image of the amplitudes.
fn weights(n: usize, amps: &[C64], conv: StellarConvention) -> Vec<C64> {
    match conv {
        StellarConvention::Doubled => amps.iter().map(|c| c * c).collect(),
        StellarConvention::Majorana => {
            // divide out the largest weight first to stay finite at large 2j
            let top = ln_binomial(n as u64, n as u64 / 2);
            amps.iter()
                .enumerate()
                .map(|(k, c)| c * (0.5 * (ln_binomial(n as u64, k as u64) - top)).exp())
                .collect()
        }
    }
}

fn coefficient_sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn state_to_stars(s: &SpinState) -> Result<StarConfig> {
    state_to_stars_with(s, StellarConvention::Doubled)
}

/// Stars are the roots of `Σ_k (-1)^k conj(g_k) z^{2j-k}`; each vanishing
/// leading coefficient contributes a star at infinity.
pub fn state_to_stars_with(s: &SpinState, conv: StellarConvention) -> Result<StarConfig> {
    let n = s.j().twice();
    if n > STELLAR_LIMIT {
        return Err(SpinError::Capacity { what: "stellar representation 2j", limit: STELLAR_LIMIT as usize, requested: n as usize });
    }
    let amps = s.amplitudes();
    if amps.iter().all(|c| c.norm() == 0.0) {
        return Err(SpinError::domain("state has no non-zero amplitude"));
    }
    let g = weights(n as usize, &amps, conv);
    let coeffs: Vec<C64> = g.iter().enumerate().map(|(k, c)| c.conj() * coefficient_sign(k)).collect();
    let stars = polynomial_roots(&coeffs)?
        .into_iter()
        .map(|r| r.map_or(Star::Infinity, Star::from))
        .collect();
    Ok(StarConfig { stars })
}

pub fn stars_to_state(c: &StarConfig) -> Result<SpinState> {
    stars_to_state_with(c, StellarConvention::Doubled)
}

/// Square roots of `g_k` along `k`, choosing each branch by linear
/// extrapolation of the phase of the previous two non-zero amplitudes.
fn continuous_sqrt(g: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(g.len());
    let mut history: Vec<(usize, f64)> = Vec::new();
    for (k, &v) in g.iter().enumerate() {
        let root = v.sqrt();
        if root.norm() == 0.0 {
            out.push(root);
            continue;
        }
        let chosen = match history.as_slice() {
            [] => root,
            [.., (k1, p1)] if history.len() == 1 => pick_branch(root, *p1 + 0.0 * (k - k1) as f64),
            [.., (k0, p0), (k1, p1)] => {
                let slope = (p1 - p0) / (k1 - k0) as f64;
                pick_branch(root, p1 + slope * (k - k1) as f64)
            }
            _ => unreachable!(),
        };
        // unwrap the phase so the extrapolation stays linear
        let raw = chosen.arg();
        let phase = match history.last() {
            Some((_, prev)) => prev + wrap(raw - prev),
            None => raw,
        };
        history.push((k, phase));
        out.push(chosen);
    }
    out
}

fn wrap(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    (x + PI).rem_euclid(TAU) - PI
}

fn pick_branch(root: C64, predicted: f64) -> C64 {
    if wrap(root.arg() - predicted).abs() <= std::f64::consts::FRAC_PI_2 {
        root
    } else {
        -root
    }
}

/// Expands `∏ (z - w_ℓ)` over finite stars, reads off the coefficients and
/// undoes the convention's amplitude map. The result is normalized; its
/// global phase is arbitrary.
pub fn stars_to_state_with(c: &StarConfig, conv: StellarConvention) -> Result<SpinState> {
    let n = c.len();
    let finite: Vec<C64> = c.stars.iter().filter_map(Star::finite).collect();
    let d = n - finite.len();
    let expanded = roots::expand_scaled(&finite);
    let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
    coeffs[d..].copy_from_slice(&expanded);
    let g: Vec<C64> = coeffs.iter().enumerate().map(|(k, z)| z.conj() * coefficient_sign(k)).collect();
    let amps = match conv {
        StellarConvention::Doubled => continuous_sqrt(&g),
        StellarConvention::Majorana => {
            let top = ln_binomial(n as u64, n as u64 / 2);
            g.iter()
                .enumerate()
                .map(|(k, v)| v * (0.5 * (top - ln_binomial(n as u64, k as u64))).exp())
                .collect()
        }
    };
    SpinState::from_amplitudes(HalfInt::from_twice(n as u32), amps)
}
