//! Haar-random large-spin states: broad, never classical.

use spinj::sg_dynamics::{large_spin_sg_profile, FieldConfig};
use spinj::spin_core::{coherent_state, expectation_and_variance, random_state};
use spinj::{Direction, HalfInt, Result};

fn main() -> Result<()> {
    let j = HalfInt::from_int(1000);
    for seed in 1..=4u64 {
        let (mean, var) = expectation_and_variance(&random_state(j, seed), Direction::Z)?;
        println!("seed {seed}: ⟨Jz⟩ = {mean:>8.2}, ΔJz/j = {:.4}", var.sqrt() / 1000.0);
    }

    let field = FieldConfig::new(1.0, 1.0, 0.0);
    let t = 200.0;
    let z_j = t * t / 2.0;
    let z: Vec<f64> = (0..2401).map(|i| z_j * (-1.2 + 2.4 * i as f64 / 2400.0)).collect();
    let c = large_spin_sg_profile(&coherent_state(j, Direction::X), &field, t, &z)?;
    let r = large_spin_sg_profile(&random_state(j, 1), &field, t, &z)?;
    println!("coherent: width/z_j = {:.3}, {} peak(s)", c.std() / z_j, c.peaks(0.2).len());
    println!("random:   width/z_j = {:.3}, {} peak(s)", r.std() / z_j, r.peaks(0.2).len());
    Ok(())
}
