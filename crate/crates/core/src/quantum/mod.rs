//! Quantum states, channels and the induced system dynamics.

mod channel;
mod implementation;
pub mod random;
mod state;

pub use channel::{apply_channel, channel_from_unitary, induced_channel, QuantumChannel, TransferMatrix};
pub use implementation::ImplementationSet;
pub use random::SeedStream;
pub use state::{bures_distance, fidelity, fidelity_factored, variance, DensityMatrix, FactoredState, PureState};
