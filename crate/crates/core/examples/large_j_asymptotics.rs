//! Saddle-point form of the coherent-state distribution at very large j.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use spinj::asymptotics::{approx_distribution, exact_vs_approx_tv, saddle_point};
use spinj::{HalfInt, Result};

fn main() -> Result<()> {
    let j = HalfInt::from_int(200_000);
    for theta in [FRAC_PI_2, FRAC_PI_4] {
        let sp = saddle_point(theta)?;
        let prof = approx_distribution(j, theta, 4001)?;
        println!(
            "θ = {theta:.4}: x₀ = {:.6}, profile peak at x = {:.6}, width {:.3e} (Gaussian {:.3e})",
            sp.x0,
            prof.argmax_x(),
            prof.std_x(),
            (sp.x0 * (1.0 - sp.x0) / j.twice() as f64).sqrt()
        );
    }
    for j in [100u32, 1000, 10_000] {
        let tv = exact_vs_approx_tv(HalfInt::from_int(j), FRAC_PI_4)?;
        println!("j = {j:>5}: total variation exact vs approximate = {tv:.3e}");
    }
    Ok(())
}
