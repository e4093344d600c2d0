//! Spin-j states, generators and measurement statistics.

mod direction;
mod measure;
pub mod operators;
mod schwinger;
mod state;

pub use direction::Direction;
pub use measure::{expectation_and_variance, measurement_distribution, MDistribution};
pub use operators::{Component, SpinMatrices, SpinOperators};
pub use schwinger::schwinger_generators;
pub use state::{
    almost_oriented_state, coherent_state, random_state, Orientation, SpinState, StorageMode,
    LOG_STORAGE_THRESHOLD,
};
