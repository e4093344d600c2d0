use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::spin_core::SpinState;

/// Largest multiplet dimension materialized as dense matrices.
pub const DENSE_OPERATOR_DIM: usize = 4097;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    X,
    Y,
    Z,
    Plus,
    Minus,
    Squared,
}

/// Dense `J_x, J_y, J_z` in the `J_z` basis (index `k` ↔ `m = -j + k`).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinMatrices {
    pub j: HalfInt,
    pub x: DMatrix<Complex64>,
    pub y: DMatrix<Complex64>,
    pub z: DMatrix<Complex64>,
}

impl SpinMatrices {
    /// `max |[J_x, J_y] - iJ_z|` and cyclic permutations.
    pub fn commutator_residual(&self) -> f64 {
        let i = Complex64::new(0.0, 1.0);
        let pairs = [(&self.x, &self.y, &self.z), (&self.y, &self.z, &self.x), (&self.z, &self.x, &self.y)];
        pairs
            .iter()
            .map(|(a, b, c)| {
                let r = (*a * *b - *b * *a) - (*c).map(|v| v * i);
                r.iter().map(|v| v.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn casimir(&self) -> DMatrix<Complex64> {
        &self.x * &self.x + &self.y * &self.y + &self.z * &self.z
    }

    /// Largest elementwise difference to another set of matrices.
    pub fn max_difference(&self, other: &SpinMatrices) -> f64 {
        [(&self.x, &other.x), (&self.y, &other.y), (&self.z, &other.z)]
            .iter()
            .map(|(a, b)| (*a - *b).iter().map(|v| v.norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Standard spin-j generators, banded: `J_z` diagonal and `J_+` on the first
/// off-diagonal. Dense matrices are produced on request; application is
/// matrix-free at any size.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinOperators {
    j: HalfInt,
    jz: Vec<f64>,
    /// `raise[k] = ⟨k+1| J_+ |k⟩ = √(j(j+1) - m(m+1))`
    raise: Vec<f64>,
}

impl SpinOperators {
    pub fn new(j: HalfInt) -> Self {
        let jv = j.value();
        let jz = (0..j.dim()).map(|k| j.m_of_index(k)).collect();
        let raise = (0..j.twice() as usize)
            .map(|k| {
                let m = j.m_of_index(k);
                // (j - m)(j + m + 1) avoids cancellation at large j
                ((jv - m) * (jv + m + 1.0)).sqrt()
            })
            .collect();
        SpinOperators { j, jz, raise }
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn apply(&self, component: Component, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.j.dim();
        assert_eq!(v.len(), n, "vector length does not match multiplet");
        let zero = Complex64::new(0.0, 0.0);
        let plus = |v: &[Complex64]| {
            let mut out = vec![zero; n];
            for k in 0..n - 1 {
                out[k + 1] = v[k] * self.raise[k];
            }
            out
        };
        let minus = |v: &[Complex64]| {
            let mut out = vec![zero; n];
            for k in 0..n - 1 {
                out[k] = v[k + 1] * self.raise[k];
            }
            out
        };
        match component {
            Component::Z => v.iter().zip(&self.jz).map(|(a, m)| a * m).collect(),
            Component::Plus => plus(v),
            Component::Minus => minus(v),
            Component::X => plus(v).iter().zip(minus(v)).map(|(p, m)| (p + m) * 0.5).collect(),
            Component::Y => plus(v)
                .iter()
                .zip(minus(v))
                .map(|(p, m)| (p - m) * Complex64::new(0.0, -0.5))
                .collect(),
            Component::Squared => {
                // J² = J_- J_+ + J_z² + J_z
                let mp = minus(&plus(v));
                mp.iter().zip(v).zip(&self.jz).map(|((a, b), m)| a + b * (m * m + m)).collect()
            }
        }
    }

    pub fn dense(&self, component: Component) -> Result<DMatrix<Complex64>> {
        let n = self.j.dim();
        if n > DENSE_OPERATOR_DIM {
            return Err(SpinError::Capacity { what: "dense operator dimension", limit: DENSE_OPERATOR_DIM, requested: n });
        }
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            e[c] = Complex64::new(1.0, 0.0);
            for (r, val) in self.apply(component, &e).into_iter().enumerate() {
                m[(r, c)] = val;
            }
            e[c] = Complex64::new(0.0, 0.0);
        }
        Ok(m)
    }

    pub fn matrices(&self) -> Result<SpinMatrices> {
        Ok(SpinMatrices {
            j: self.j,
            x: self.dense(Component::X)?,
            y: self.dense(Component::Y)?,
            z: self.dense(Component::Z)?,
        })
    }

    /// `(⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)` in the given state.
    pub fn expectation_vector(&self, s: &SpinState) -> Vector3<f64> {
        let a = s.amplitudes();
        // ⟨J_+⟩ = Σ conj(a_{k+1}) a_k raise_k
        let plus: Complex64 = (0..a.len().saturating_sub(1)).map(|k| a[k + 1].conj() * a[k] * self.raise[k]).sum();
        let z: f64 = a.iter().zip(&self.jz).map(|(c, m)| c.norm_sqr() * m).sum();
        Vector3::new(plus.re, plus.im, z)
    }
}
