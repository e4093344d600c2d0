//! Wigner rotation matrices built from spin-½ products.

use spinj::rotations::{rotate_state, wigner_d, wigner_half, EulerAngles};
use spinj::spin_core::coherent_state;
use spinj::{Direction, HalfInt, Result};

fn main() -> Result<()> {
    let half = wigner_half(&EulerAngles::new(0.0, std::f64::consts::PI, 0.0));
    if let Some(rows) = half.to_up_down() {
        println!("D^(1/2)(0, π, 0) in the (up, down) basis:");
        for row in rows {
            println!("  [{:+.3} {:+.3}i, {:+.3} {:+.3}i]", row[0].re, row[0].im, row[1].re, row[1].im);
        }
    }

    let n = Direction::new(1.1, -0.4);
    for twice in [1u32, 7, 40, 100] {
        let j = HalfInt::from_twice(twice);
        let d = wigner_d(j, &EulerAngles::aligning(n))?;
        let rotated = d.apply(&coherent_state(j, n).amplitudes());
        println!(
            "j = {j:>4}: unitarity residual {:.1e}, |⟨j,j|D|j,n⟩|² = {:.12}",
            d.unitarity_residual(),
            rotated[twice as usize].norm_sqr()
        );
    }

    // Oriented states rotate in closed form far beyond the dense limit.
    let big = coherent_state(HalfInt::from_int(1_000_000), n);
    let r = rotate_state(&big, &EulerAngles::aligning(n))?;
    println!("j = 10⁶: rotated orientation {:?}", r.orientation().map(|o| o.axis));
    Ok(())
}
