use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

/// A point on the unit sphere, `n = (sinθ cosφ, sinθ sinφ, cosθ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    pub const Z: Direction = Direction { theta: 0.0, phi: 0.0 };
    pub const MINUS_Z: Direction = Direction { theta: PI, phi: 0.0 };
    pub const X: Direction = Direction { theta: PI / 2.0, phi: 0.0 };
    pub const Y: Direction = Direction { theta: PI / 2.0, phi: PI / 2.0 };

    /// Folds arbitrary angles into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta;
        let mut phi = phi;
        if !(0.0..=PI).contains(&theta) {
            theta = theta.rem_euclid(TAU);
            if theta > PI {
                theta = TAU - theta;
                phi += PI;
            }
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Direction { theta, phi }
    }

    pub fn from_vector(v: Vector3<f64>) -> Option<Self> {
        let r = v.norm();
        if !(r > 0.0) || !r.is_finite() {
            return None;
        }
        let theta = (v.z / r).clamp(-1.0, 1.0).acos();
        let phi = if v.x == 0.0 && v.y == 0.0 { 0.0 } else { v.y.atan2(v.x) };
        Some(Direction::new(theta, phi))
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn vector(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.vector().dot(&other.vector())
    }

    /// Angle between the two directions, in `[0, π]`.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        let a = self.vector();
        let b = other.vector();
        a.cross(&b).norm().atan2(a.dot(&b))
    }

    pub fn is_north_pole(&self) -> bool {
        self.theta == 0.0
    }

    pub fn is_south_pole(&self) -> bool {
        self.theta == PI
    }
}
