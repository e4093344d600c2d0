//! Concentration of |Y_lm|² on the equator as l grows.

use spinj::orbital::{concentration_fraction, cos_theta_moments, count_nodes, sph_harm_sq, uniform_cos_grid};
use spinj::Result;

fn main() -> Result<()> {
    for l in [10u64, 100, 1000, 10_000] {
        let (_, std) = cos_theta_moments(l, l as i64)?;
        println!(
            "l = {l:>6}: std(cos θ) = {std:.6} (1/√(2l+3) = {:.6}), weight in |cos θ| < 0.1: {:.6}",
            1.0 / ((2 * l + 3) as f64).sqrt(),
            concentration_fraction(l, 0.1)?
        );
    }
    let p = sph_harm_sq(100, 50, &uniform_cos_grid(2001))?;
    println!("l = 100, m = 50: {} nodes in cos θ, peak at cos θ = {:.4}", count_nodes(100, 50, 20_000)?, p.argmax_cos_theta());
    Ok(())
}
