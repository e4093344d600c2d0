//! Jz distribution of coherent states, exact and in the classical limit.
//!
//! `cargo run --example coherent_distribution`

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use spinj::spin_core::{coherent_state, expectation_and_variance, measurement_distribution};
use spinj::{Direction, HalfInt, Result};

fn main() -> Result<()> {
    let j: HalfInt = "13/2".parse()?;
    for theta in [FRAC_PI_2, FRAC_PI_4] {
        let d = measurement_distribution(&coherent_state(j, Direction::new(theta, 0.0)), Direction::Z)?;
        println!("j = {j}, θ = {theta:.4}");
        for (k, p) in d.probs.iter().enumerate() {
            println!("  m = {:>5}  {:<40} {p:.6}", d.m(k), "#".repeat((p * 150.0) as usize));
        }
    }

    // ΔJz/j shrinks like 1/√(2j): the state becomes a classical vector.
    for j in [10u32, 100, 1000, 10_000, 100_000] {
        let s = coherent_state(HalfInt::from_int(j), Direction::X);
        let (_, var) = expectation_and_variance(&s, Direction::Z)?;
        println!("j = {j:>6}: ΔJz/j = {:.6}  (1/√(2j) = {:.6})", var.sqrt() / j as f64, (0.5 / j as f64).sqrt());
    }
    Ok(())
}
