//! Quantum spin-j states from `j = ½` to `j ~ 10⁵`.
//!
//! Coherent states and their Stern-Gerlach statistics, the stellar
//! representation, Wigner rotation matrices, addition of two spins,
//! orbital concentration of `|Y_ℓℓ|²` and two-component wavepacket dynamics
//! in a Stern-Gerlach field.

pub mod asymptotics;
pub mod cli;
pub mod composition;
pub mod error;
pub mod halfint;
pub mod orbital;
pub mod rotations;
pub mod sg_dynamics;
pub mod special;
pub mod spin_core;
pub mod stellar;

pub use error::{Result, SpinError};
pub use halfint::HalfInt;
pub use spin_core::{Direction, SpinState};
