//! Recombination of the split components by a reversed gradient.
//!
//! After the first half of the run the spinor is time-reversed,
//! `Θ = iσ_y K`, which turns every momentum around (the quantum analogue of
//! the classical turn-around) and relabels the spin; the second half then
//! runs with the gradient reversed. In the decoupled equations each
//! component retraces its path, so the packets re-overlap exactly. The
//! specific reversal stage is a modeling choice: the recombination itself
//! is only described qualitatively.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::sg_dynamics::field::{FieldConfig, SpinorField, TrajectoryRecord};
use crate::sg_dynamics::solver::{evolve_decoupled, RunSpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EraserProtocol {
    /// `+b₀` for half the steps, `Θ`, then `−b₀`.
    #[default]
    Reversal,
    /// Gradient flipped at half time without reversing momenta.
    GradientFlipOnly,
    /// Only the first half: the components stay apart.
    HalfRun,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EraserOutcome {
    pub protocol: EraserProtocol,
    /// Spin coherence `|⟨ψ₁|ψ₂⟩|/(‖ψ₁‖‖ψ₂‖)` of the final spinor: how well the
    /// two components can interfere again.
    pub fidelity: f64,
    /// `|⟨ref|Ψ_final⟩|` with `ref = ΘΨ₀` after a reversal and `Ψ₀` otherwise.
    pub reference_overlap: f64,
    /// `⟨z⟩_up − ⟨z⟩_down` at the half-way point and at the end.
    pub separation_at_turn: f64,
    pub final_separation: f64,
    #[serde(skip)]
    pub first_half: TrajectoryRecord,
    #[serde(skip)]
    pub second_half: Option<TrajectoryRecord>,
}

fn separation(r: &TrajectoryRecord) -> f64 {
    let (u, d) = (r.up.last().unwrap(), r.down.last().unwrap());
    u.z - d.z
}

pub fn eraser_recombine(
    initial: &SpinorField,
    field: &FieldConfig,
    spec: &RunSpec,
    protocol: EraserProtocol,
) -> Result<EraserOutcome> {
    let first = RunSpec { steps: spec.steps / 2, ..*spec };
    let (mid, r1) = evolve_decoupled(initial, field, &first)?;
    let separation_at_turn = separation(&r1);
    if protocol == EraserProtocol::HalfRun {
        return Ok(EraserOutcome {
            protocol,
            fidelity: mid.spin_coherence(),
            reference_overlap: mid.overlap(initial),
            separation_at_turn,
            final_separation: separation_at_turn,
            first_half: r1,
            second_half: None,
        });
    }
    let reversed_field = FieldConfig { gradient: -field.gradient, ..field.clone() };
    let second = RunSpec { steps: spec.steps - first.steps, ..*spec };
    let (start, reference) = match protocol {
        EraserProtocol::Reversal => (mid.time_reversed(), initial.time_reversed()),
        _ => (mid, initial.clone()),
    };
    let (end, r2) = evolve_decoupled(&start, &reversed_field, &second)?;
    Ok(EraserOutcome {
        protocol,
        fidelity: end.spin_coherence(),
        reference_overlap: end.overlap(&reference),
        separation_at_turn,
        final_separation: separation(&r2),
        first_half: r1,
        second_half: Some(r2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sg_dynamics::field::{spinor_along, PacketSpec};
    use crate::sg_dynamics::grid::Grid2D;
    use crate::spin_core::Direction;

    fn run(protocol: EraserProtocol, gradient: f64) -> EraserOutcome {
        let g = Grid2D::new(16, 256, 10.0, 60.0).unwrap();
        let init = SpinorField::gaussian(g, &PacketSpec::default(), spinor_along(Direction::X)).unwrap();
        let field = FieldConfig::new(1.0, gradient, 1e6);
        eraser_recombine(&init, &field, &RunSpec::new(0.005, 1200, 100), protocol).unwrap()
    }

    #[test]
    fn reversal_restores_coherence() {
        let out = run(EraserProtocol::Reversal, 1.0);
        assert!(out.separation_at_turn > 8.0);
        assert!(out.fidelity > 0.999_999, "{}", out.fidelity);
        assert!(out.reference_overlap > 0.999_999);
        assert!(out.final_separation.abs() < 1e-6);
    }

    #[test]
    fn without_reversal_components_stay_apart() {
        let half = run(EraserProtocol::HalfRun, 1.0);
        assert!(half.fidelity < 1e-3);
        let flip = run(EraserProtocol::GradientFlipOnly, 1.0);
        assert!(flip.final_separation > half.separation_at_turn);
        assert!(flip.fidelity < 1e-3);
    }

    #[test]
    fn zero_gradient_keeps_full_coherence() {
        assert!(run(EraserProtocol::Reversal, 0.0).fidelity > 0.999_999);
        assert!(run(EraserProtocol::HalfRun, 0.0).fidelity > 0.999_999);
    }
}
