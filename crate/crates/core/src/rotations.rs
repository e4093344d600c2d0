//! Rotation matrices `D^j(γ, θ, φ) = U_z(γ) U_y(θ) U_z(φ)` for arbitrary `j`,
//! built as the symmetrized `2j`-fold product of the spin-½ matrix.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::special::ln_factorial;
use crate::spin_core::{almost_oriented_state, Direction, Orientation, SpinState};

/// Largest `2j` for which a dense `D^j` is assembled.
pub const DENSE_ROTATION_LIMIT: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub gamma: f64,
    pub theta: f64,
    pub phi: f64,
}

/// A 2×2 matrix in (↑, ↓) row/column order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinHalfMatrix(pub [[Complex64; 2]; 2]);

impl SpinHalfMatrix {
    pub fn adjoint(&self) -> SpinHalfMatrix {
        let m = &self.0;
        SpinHalfMatrix([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

impl EulerAngles {
    pub const IDENTITY: EulerAngles = EulerAngles { gamma: 0.0, theta: 0.0, phi: 0.0 };

    pub fn new(gamma: f64, theta: f64, phi: f64) -> Self {
        EulerAngles { gamma, theta, phi }
    }

    /// `(0, θ, φ)` of `n`: the rotation taking `n` to `ẑ`.
    pub fn aligning(n: Direction) -> Self {
        EulerAngles::new(0.0, n.theta(), n.phi())
    }

    /// Spin-½ matrix, rows/columns ordered (↑, ↓).
    pub fn spin_half(&self) -> SpinHalfMatrix {
        let (s, c) = (self.theta / 2.0).sin_cos();
        let (g, p) = (self.gamma, self.phi);
        SpinHalfMatrix([
            [Complex64::from_polar(c, (g + p) / 2.0), Complex64::from_polar(s, (g - p) / 2.0)],
            [Complex64::from_polar(-s, (p - g) / 2.0), Complex64::from_polar(c, -(g + p) / 2.0)],
        ])
    }

    /// The SO(3) matrix `R(Ω)` with `D(Ω)|n⟩ ∝ |R(Ω) n⟩`, i.e.
    /// `R = R_z(-γ) R_y(-θ) R_z(-φ)`.
    pub fn so3(&self) -> Matrix3<f64> {
        rot_z(-self.gamma) * rot_y(-self.theta) * rot_z(-self.phi)
    }

    /// Angles of an SO(3) matrix under the same convention.
    pub fn from_so3(r: &Matrix3<f64>) -> Self {
        // r = Rz(a) Ry(b) Rz(c) with a = -γ, b = -θ, c = -φ
        let b = r[(2, 2)].clamp(-1.0, 1.0).acos();
        let (a, c) = if b.sin().abs() > 1e-12 {
            (r[(1, 2)].atan2(r[(0, 2)]), r[(2, 1)].atan2(-r[(2, 0)]))
        } else if r[(2, 2)] > 0.0 {
            (r[(1, 0)].atan2(r[(0, 0)]), 0.0)
        } else {
            ((-r[(1, 0)]).atan2(-r[(0, 0)]), 0.0)
        };
        EulerAngles::new(-a, -b, -c)
    }

    /// Angles of `R(second) · R(first)`.
    pub fn then(&self, second: &EulerAngles) -> EulerAngles {
        EulerAngles::from_so3(&(second.so3() * self.so3()))
    }

    pub fn rotate_direction(&self, n: &Direction) -> Direction {
        Direction::from_vector(self.so3() * n.vector()).expect("rotation preserves norm")
    }
}

fn rot_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Dense `D^j`, indexed by `(k, k')` with `m = -j + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationMatrix {
    j: HalfInt,
    data: DMatrix<Complex64>,
}

impl RotationMatrix {
    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, k: usize, k_prime: usize) -> Complex64 {
        self.data[(k, k_prime)]
    }

    /// Element `D_{m, m'}` addressed by `2m`, `2m'`.
    pub fn element(&self, twice_m: i64, twice_m_prime: i64) -> Option<Complex64> {
        let k = self.j.index_of_twice_m(twice_m)?;
        let kp = self.j.index_of_twice_m(twice_m_prime)?;
        Some(self.data[(k, kp)])
    }

    /// For `j = ½`, the matrix in (↑, ↓) order.
    pub fn to_up_down(&self) -> Option<[[Complex64; 2]; 2]> {
        (self.j == HalfInt::HALF).then(|| {
            [[self.data[(1, 1)], self.data[(1, 0)]], [self.data[(0, 1)], self.data[(0, 0)]]]
        })
    }

    /// `max |D†D - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let p = self.data.adjoint() * &self.data;
        let n = p.nrows();
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in 0..n {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((p[(r, c)] - target).norm());
            }
        }
        worst
    }

    pub fn apply(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        let n = self.data.nrows();
        (0..n)
            .map(|r| (0..n).map(|c| self.data[(r, c)] * amplitudes[c]).sum())
            .collect()
    }
}

/// `D^{1/2}(Ω)`.
pub fn wigner_half(omega: &EulerAngles) -> RotationMatrix {
    wigner_d(HalfInt::HALF, omega).expect("spin-half is always dense")
}

/// The real symmetrized product `d^{(N)}` of `[[c, s], [-s, c]]`, built one
/// spin-½ factor at a time through `|N,k⟩ = √(k/N)|N-1,k-1⟩|↑⟩ + √((N-k)/N)|N-1,k⟩|↓⟩`.
fn symmetric_power_real(n: usize, theta: f64) -> Vec<f64> {
    let (s, c) = (theta / 2.0).sin_cos();
    // u in (↑, ↓) order: a = c, b = s, cc = -s, d = c
    let (ua, ub, uc, ud) = (c, s, -s, c);
    let sqrt: Vec<f64> = (0..=n).map(|i| (i as f64).sqrt()).collect();
    let mut prev = vec![1.0f64];
    for size in 1..=n {
        let dim = size + 1;
        let pdim = size;
        let mut next = vec![0.0f64; dim * dim];
        let inv = 1.0 / size as f64;
        for k in 0..dim {
            for kp in 0..dim {
                let mut acc = 0.0;
                if k > 0 && kp > 0 {
                    acc += sqrt[k] * sqrt[kp] * prev[(k - 1) * pdim + kp - 1] * ua;
                }
                if k > 0 && kp < pdim {
                    acc += sqrt[k] * sqrt[size - kp] * prev[(k - 1) * pdim + kp] * ub;
                }
                if k < pdim && kp > 0 {
                    acc += sqrt[size - k] * sqrt[kp] * prev[k * pdim + kp - 1] * uc;
                }
                if k < pdim && kp < pdim {
                    acc += sqrt[size - k] * sqrt[size - kp] * prev[k * pdim + kp] * ud;
                }
                next[k * dim + kp] = acc * inv;
            }
        }
        prev = next;
    }
    prev
}

/// `D^j(Ω)` for `2j ≤ 1024`.
///
/// The `z` factors are diagonal with entries `e^{iγm}`, `e^{iφm'}`; the `y`
/// factor is the symmetrized tensor power of the spin-½ `U_y(θ)`.
pub fn wigner_d(j: HalfInt, omega: &EulerAngles) -> Result<RotationMatrix> {
    if j.twice() > DENSE_ROTATION_LIMIT {
        return Err(SpinError::Capacity {
            what: "dense rotation matrix 2j",
            limit: DENSE_ROTATION_LIMIT as usize,
            requested: j.twice() as usize,
        });
    }
    let n = j.twice() as usize;
    let d = symmetric_power_real(n, omega.theta);
    let dim = n + 1;
    let data = DMatrix::from_fn(dim, dim, |k, kp| {
        let m = j.m_of_index(k);
        let mp = j.m_of_index(kp);
        Complex64::from_polar(d[k * dim + kp], omega.gamma * m + omega.phi * mp)
    });
    Ok(RotationMatrix { j, data })
}

/// Column `k'` of the symmetric power of `u`, as `(ln|D_{k,k'}|, arg D_{k,k'})` per `k`.
///
/// Sums `min(k', 2j - k') + 1` terms per entry in log space; it is accurate
/// for columns near either edge of the multiplet at any `j`.
pub fn log_polar_column(j: HalfInt, u: &SpinHalfMatrix, col: usize) -> Vec<(f64, f64)> {
    let n = j.twice() as usize;
    assert!(col <= n, "column {col} outside multiplet");
    let [[a, b], [c, d]] = u.0;
    let logs = [a, b, c, d].map(|z| if z.norm() == 0.0 { f64::NEG_INFINITY } else { z.norm().ln() });
    let args = [a, b, c, d].map(|z| z.arg());
    let pow_log = |idx: usize, e: usize| if e == 0 { 0.0 } else { e as f64 * logs[idx] };
    let (kp, rest) = (col, n - col);
    let ln_kp_fact = ln_factorial(kp as u64) + ln_factorial(rest as u64);
    let ln_binom = |top: usize, k: usize| {
        ln_factorial(top as u64) - ln_factorial(k as u64) - ln_factorial((top - k) as u64)
    };
    (0..=n)
        .map(|k| {
            let pref = 0.5 * (ln_factorial(k as u64) + ln_factorial((n - k) as u64) - ln_kp_fact);
            let lo = k.saturating_sub(rest);
            let hi = kp.min(k);
            let terms: Vec<(f64, f64)> = (lo..=hi)
                .map(|s| {
                    let (ea, ec, eb, ed) = (s, kp - s, k - s, rest + s - k);
                    let lm = pref
                        + ln_binom(kp, s)
                        + ln_binom(rest, k - s)
                        + pow_log(0, ea)
                        + pow_log(2, ec)
                        + pow_log(1, eb)
                        + pow_log(3, ed);
                    let ph = ea as f64 * args[0] + ec as f64 * args[2] + eb as f64 * args[1] + ed as f64 * args[3];
                    (lm, ph)
                })
                .filter(|(lm, _)| lm.is_finite())
                .collect();
            let lmax = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
            if !lmax.is_finite() {
                return (f64::NEG_INFINITY, 0.0);
            }
            let sum: Complex64 = terms.iter().map(|&(lm, ph)| Complex64::from_polar((lm - lmax).exp(), ph)).sum();
            if sum.norm() == 0.0 {
                (f64::NEG_INFINITY, 0.0)
            } else {
                (lmax + sum.norm().ln(), sum.arg())
            }
        })
        .collect()
}

/// `s' = D(Ω) s`.
///
/// Dense states up to `2j = 1024` are multiplied through `D^j`. Larger states
/// with a known orientation are rebuilt along the rotated axis; the result then
/// agrees with `D(Ω) s` up to a global phase.
pub fn rotate_state(s: &SpinState, omega: &EulerAngles) -> Result<SpinState> {
    let j = s.j();
    let orientation = s.orientation().map(|o| Orientation { axis: omega.rotate_direction(&o.axis), q: o.q });
    if j.twice() <= DENSE_ROTATION_LIMIT {
        let d = wigner_d(j, omega)?;
        let rotated = SpinState::from_amplitudes(j, d.apply(&s.amplitudes()))?;
        return Ok(rotated.with_orientation(orientation));
    }
    match orientation {
        Some(o) => almost_oriented_state(j, o.axis, o.q),
        None => Err(SpinError::Capacity {
            what: "rotation of an unstructured state 2j",
            limit: DENSE_ROTATION_LIMIT as usize,
            requested: j.twice() as usize,
        }),
    }
}

/// `(⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)` rotated by `R(Ω)`.
pub fn rotate_vector(omega: &EulerAngles, v: Vector3<f64>) -> Vector3<f64> {
    omega.so3() * v
}
