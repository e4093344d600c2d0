//! Product of two coherent states behaves as a classical vector sum.

use std::f64::consts::FRAC_PI_4;

use spinj::composition::{classical_sum, product_projection_distribution, total_j2_expectation, ProductState};
use spinj::spin_core::coherent_state;
use spinj::{Direction, HalfInt, Result};

fn main() -> Result<()> {
    let (n1, n2, axis) = (Direction::Z, Direction::X, Direction::new(FRAC_PI_4, 0.0));
    for j in [5u32, 20, 80, 1000] {
        let j = HalfInt::from_int(j);
        let p = ProductState::new(coherent_state(j, n1), coherent_state(j, n2));
        let d = product_projection_distribution(&p, axis)?;
        let sum = classical_sum(j, n1, j, n2);
        let j2 = total_j2_expectation(&p);
        println!(
            "j₁ = j₂ = {j:>4}: ⟨J·n₃⟩ = {:.6} (classical {:.6}), j_tot = {:.4}, ⟨J²⟩/j_tot(j_tot+1) − 1 = {:.3e}",
            d.mean(),
            j.value() * (FRAC_PI_4.cos() + FRAC_PI_4.sin()),
            sum.j_tot,
            j2 / (sum.j_tot * (sum.j_tot + 1.0)) - 1.0
        );
    }
    Ok(())
}
