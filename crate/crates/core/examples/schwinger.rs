//! Spin matrices from two bosonic modes.

use spinj::spin_core::{schwinger_generators, SpinOperators};
use spinj::{HalfInt, Result};

fn main() -> Result<()> {
    for quanta in [1u32, 2, 13, 40] {
        let g = schwinger_generators(quanta)?;
        let standard = SpinOperators::new(HalfInt::from_twice(quanta)).matrices()?;
        println!(
            "N = {quanta:>2} (j = {}): max deviation {:.1e}, commutator residual {:.1e}",
            g.j,
            g.max_difference(&standard),
            g.commutator_residual()
        );
    }
    Ok(())
}
