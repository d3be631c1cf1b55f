//! Scalar diagnostics of a gate implementation.

mod energy;
mod energy_change;
mod evaluation;
mod gate_error;

pub use energy::{delta_e, delta_eq, delta_eq_oracle, delta_eq_oracle_with};
pub use energy_change::{
    chi, commutator_norm, energy_loss_operator, energy_shift_gap, extremal_states, final_environment,
    h_s_norm, EnergyShift, ExtremalPair,
};
pub use evaluation::{Evaluation, Metrics};
pub use gate_error::{
    delta_u, delta_u_with, delta_ue, entanglement_fidelity, DeltaUEstimate, DeltaUeEstimate, SamplerBudget,
};
