//! Oracles built without the library's own operator code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// `J_x, J_y, J_z` from the ladder formula, basis index `k = m + j`.
pub fn ladder_matrices(twice: u32) -> [DMatrix<C64>; 3] {
    let dim = twice as usize + 1;
    let j = twice as f64 / 2.0;
    let mut plus = DMatrix::<C64>::zeros(dim, dim);
    for k in 0..dim - 1 {
        let m = k as f64 - j;
        plus[(k + 1, k)] = C64::new(((j - m) * (j + m + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let x = (&plus + &minus) * C64::new(0.5, 0.0);
    let y = (&plus - &minus) * C64::new(0.0, -0.5);
    let z = DMatrix::from_fn(dim, dim, |r, c| if r == c { C64::new(r as f64 - j, 0.0) } else { C64::new(0.0, 0.0) });
    [x, y, z]
}

pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(a.nrows() * b.nrows(), a.ncols() * b.ncols(), |r, c| {
        a[(r / b.nrows(), c / b.ncols())] * b[(r % b.nrows(), c % b.ncols())]
    })
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
