//! Spin generators from two bosonic modes, `J^a = Σ a†_i (τ^a/2)_{ij} a_j`,
//! restricted to the sector with `N` quanta.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SpinError};
use crate::halfint::HalfInt;
use crate::spin_core::operators::{SpinMatrices, DENSE_OPERATOR_DIM};

/// Occupations `(n_up, n_down)`.
type Fock = [u32; 2];

fn annihilate(mode: usize, s: Fock) -> Option<(f64, Fock)> {
    (s[mode] > 0).then(|| {
        let mut out = s;
        out[mode] -= 1;
        ((s[mode] as f64).sqrt(), out)
    })
}

fn create(mode: usize, s: Fock) -> (f64, Fock) {
    let mut out = s;
    out[mode] += 1;
    (((s[mode] + 1) as f64).sqrt(), out)
}

fn pauli() -> [[[Complex64; 2]; 2]; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [[[z, one], [one, z]], [[z, -i], [i, z]], [[one, z], [z, -one]]]
}

/// `J_x, J_y, J_z` for `j = N/2`, basis index `k = n_up`.
pub fn schwinger_generators(quanta: u32) -> Result<SpinMatrices> {
    let dim = quanta as usize + 1;
    if dim > DENSE_OPERATOR_DIM {
        return Err(SpinError::Capacity { what: "oscillator sector dimension", limit: DENSE_OPERATOR_DIM, requested: dim });
    }
    let paulis = pauli();
    let mut mats = [DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim)];
    for col in 0..dim {
        let ket: Fock = [col as u32, quanta - col as u32];
        for (a, tau) in paulis.iter().enumerate() {
            for (i, row) in tau.iter().enumerate() {
                for (jj, &coef) in row.iter().enumerate() {
                    if coef == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let Some((amp_a, lowered)) = annihilate(jj, ket) else { continue };
                    let (amp_c, out) = create(i, lowered);
                    debug_assert_eq!(out[0] + out[1], quanta);
                    mats[a][(out[0] as usize, col)] += coef * 0.5 * amp_a * amp_c;
                }
            }
        }
    }
    let [x, y, z] = mats;
    Ok(SpinMatrices { j: HalfInt::from_twice(quanta), x, y, z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin_core::SpinOperators;

    #[test]
    fn single_quantum_gives_pauli_halves() {
        let m = schwinger_generators(1).unwrap();
        let std = SpinOperators::new(HalfInt::HALF).matrices().unwrap();
        assert!(m.max_difference(&std) < 1e-15);
    }

    #[test]
    fn two_quanta_give_spin_one() {
        let m = schwinger_generators(2).unwrap();
        // k = n_up ascending, so J_z = diag(-1, 0, 1)
        for (k, want) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
            assert!((m.z[(k, k)].re - want).abs() < 1e-15);
        }
        let r = std::f64::consts::SQRT_2 / 2.0;
        assert!((m.x[(0, 1)].re - r).abs() < 1e-15);
        assert!((m.x[(1, 2)].re - r).abs() < 1e-15);
    }

    #[test]
    fn twenty_quanta_close_the_algebra() {
        let m = schwinger_generators(20).unwrap();
        assert!(m.commutator_residual() < 1e-12 * 10.0);
    }

    #[test]
    fn oversized_sector_is_refused() {
        assert!(matches!(schwinger_generators(5000), Err(SpinError::Capacity { .. })));
    }
}
