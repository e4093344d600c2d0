//! Stars of coherent and random states, and the Majorana round trip.

use std::f64::consts::FRAC_PI_3;

use spinj::spin_core::{coherent_state, random_state};
use spinj::stellar::{state_to_stars, state_to_stars_with, stars_to_state_with, Star, StellarConvention};
use spinj::{Direction, HalfInt, Result};

fn show(label: &str, stars: &[Star]) {
    println!("{label}");
    for s in stars {
        let [x, y, z] = s.sphere_point();
        match s {
            Star::Finite(w) => println!("  w = {:>9.5} {:+9.5}i   ({x:+.4}, {y:+.4}, {z:+.4})", w.re, w.im),
            Star::Infinity => println!("  w = ∞                     ({x:+.4}, {y:+.4}, {z:+.4})"),
        }
    }
}

fn main() -> Result<()> {
    let j = HalfInt::from_int(3);
    let coherent = state_to_stars(&coherent_state(j, Direction::new(FRAC_PI_3, 0.5)))?;
    show("coherent state, j = 3: six coincident stars", coherent.stars());
    println!("  cluster radius {:.2e}", coherent.cluster_radius());

    let s = random_state(j, 3);
    let stars = state_to_stars_with(&s, StellarConvention::Majorana)?;
    show("random state, j = 3 (Majorana convention)", stars.stars());
    let back = stars_to_state_with(&stars, StellarConvention::Majorana)?;
    println!("  round-trip fidelity 1 − {:.1e}", 1.0 - back.fidelity(&s)?);
    Ok(())
}
