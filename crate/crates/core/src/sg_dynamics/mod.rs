//! Stern-Gerlach wavepacket dynamics in the `(y, z)` plane.
//!
//! Units: `ħ = 1`, the particle mass is the mass unit and the initial packet
//! width the length unit (see [`ScalingRecord`]). The field is
//! `B = (0, −b₀y, B₀ + b₀z)`; in variables rotating with the bias precession
//! the components obey
//!
//! ```text
//! i∂ψ₁ = (p²/2m − μb₀z) ψ₁ − iμb₀y e^{−2iμB₀t} ψ₂
//! i∂ψ₂ = (p²/2m + μb₀z) ψ₂ + iμb₀y e^{+2iμB₀t} ψ₁
//! ```
//!
//! and the spin-up component is pushed towards `+z`.

pub mod config;
mod eraser;
mod field;
mod grid;
mod profile;
mod solver;

pub use config::{run_config, RunConfig, RunMode, RunOutput};
pub use eraser::{eraser_recombine, EraserOutcome, EraserProtocol};
pub use field::{
    least_squares_slope, spinor_along, FieldConfig, Moments, PacketSpec, ScalingRecord, SpinorField, TrajectoryRecord,
    DEFAULT_DECOUPLING_THRESHOLD,
};
pub use grid::{wavenumbers, Grid2D};
pub use profile::{free_width, large_spin_sg_profile, SgProfile};
pub use solver::{evolve_coupled, evolve_decoupled, Method, RunSpec, MAX_SEPARABLE_RANK};
