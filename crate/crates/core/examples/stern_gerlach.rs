//! Stern–Gerlach wavepacket dynamics: splitting, precession averaging, recombination.

use spinj::sg_dynamics::*;
use spinj::{Direction, Result};

fn main() -> Result<()> {
    let grid = Grid2D::new(128, 256, 40.0, 60.0)?;
    let init = SpinorField::gaussian(grid, &PacketSpec::default(), spinor_along(Direction::X))?;
    let field = FieldConfig::with_bias_ratio(1.0, 0.5, 1e3, &grid);

    let (end, rec) = evolve_decoupled(&init, &field, &RunSpec::new(0.01, 800, 100))?;
    let (up, down) = (rec.up.last().unwrap(), rec.down.last().unwrap());
    println!("decoupled, t = {:.1}: z↑ = {:+.4}, z↓ = {:+.4}", end.time, up.z, down.z);
    println!("  dp/dt = {:+.6} / {:+.6}, norm drift {:.1e}", rec.pz_slope(0), rec.pz_slope(1), rec.max_norm_drift());

    let spec = RunSpec::new(0.01, 300, 30);
    let (_, strong) = evolve_coupled(&init, &field, &spec)?;
    let spin_up = SpinorField::gaussian(grid, &PacketSpec::default(), spinor_along(Direction::Z))?;
    let (_, none) = evolve_coupled(&spin_up, &FieldConfig::new(1.0, 0.5, 0.0), &spec)?;
    println!("population transfer: {:.1e} with strong bias, {:.3} without", strong.population_transfer(), none.population_transfer());

    for protocol in [EraserProtocol::Reversal, EraserProtocol::GradientFlipOnly] {
        let out = eraser_recombine(&init, &field, &RunSpec::new(0.01, 800, 100), protocol)?;
        println!("{protocol:?}: separation at turn {:.3}, final fidelity {:.6}", out.separation_at_turn, out.fidelity);
    }
    Ok(())
}
