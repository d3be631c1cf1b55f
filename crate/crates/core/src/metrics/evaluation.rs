use super::energy::{delta_e, delta_eq};
use super::energy_change::{chi, commutator_norm, energy_shift_gap, extremal_states, h_s_norm, EnergyShift, ExtremalPair};
use super::gate_error::{delta_u_with, delta_ue, DeltaUEstimate, DeltaUeEstimate, SamplerBudget};
use crate::error::Result;
use crate::linalg::C64;
use crate::models::Model;
use crate::quantum::{channel_from_unitary, PureState, QuantumChannel};

/// Every scalar diagnostic of one model.
#[derive(Clone, Debug, PartialEq)]
pub struct Metrics {
    pub delta_u: f64,
    pub delta_e: f64,
    pub delta_eq: f64,
    pub delta_ue: f64,
    pub chi: f64,
    pub comm_norm: f64,
    pub h_s_norm: f64,
    pub fock_dim: Option<usize>,
    pub truncation_tail: f64,
    /// `Δ` of the extremal pair.
    pub energy_gap: f64,
    pub tilde_delta_e: f64,
    /// `L_B` between the apparatus states left by the extremal pair.
    pub env_bures: f64,
    pub gain_max: f64,
    pub gain_min: f64,
    pub samples_used: usize,
}

/// A model together with its derived quantities. The joint unitary and the
/// induced channel are kept so the sampling estimates can be redone with a
/// larger budget.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub metrics: Metrics,
    pub budget: SamplerBudget,
    pub delta_u_estimate: DeltaUEstimate,
    pub delta_ue_estimate: DeltaUeEstimate,
    pub extremal: ExtremalPair,
    pub shift: EnergyShift,
    channel: QuantumChannel,
    extras: Vec<PureState>,
    u_target: crate::linalg::ComplexMatrix,
}

impl Evaluation {
    pub fn new(model: &Model, budget: SamplerBudget) -> Result<Self> {
        let imp = model.imp();
        let u_total = imp.total_unitary(model.h_s())?;
        let channel = channel_from_unitary(&u_total, model.dim_s(), imp.sigma_e())?;
        let extremal = extremal_states(model.h_s(), model.u_target())?;
        let shift = energy_shift_gap(&u_total, imp.h_e(), imp.sigma_e(), &extremal)?;
        let extras = extremal_candidates(&extremal);
        let du = delta_u_with(&channel, model.u_target(), &budget, &extras)?;
        let due = delta_ue(&channel, model.u_target(), &budget)?;
        let metrics = Metrics {
            delta_u: du.value,
            delta_e: delta_e(imp.sigma_e(), imp.h_e())?,
            delta_eq: delta_eq(imp.sigma_e(), imp.h_e())?,
            delta_ue: due.value,
            chi: chi(&imp.free_hamiltonian(model.h_s())?, &u_total)?,
            comm_norm: commutator_norm(model.h_s(), model.u_target())?,
            h_s_norm: h_s_norm(model.h_s())?,
            fock_dim: model.fock_dim(),
            truncation_tail: imp.truncation_tail(),
            energy_gap: shift.delta,
            tilde_delta_e: shift.tilde_delta_e,
            env_bures: shift.bures_between,
            gain_max: extremal.gain_max,
            gain_min: extremal.gain_min,
            samples_used: du.samples_used,
        };
        Ok(Self {
            metrics,
            budget,
            delta_u_estimate: du,
            delta_ue_estimate: due,
            extremal,
            shift,
            channel,
            extras,
            u_target: model.u_target().clone(),
        })
    }

    pub fn channel(&self) -> &QuantumChannel {
        &self.channel
    }

    /// Redoes both sampling estimates with four times the samples. The
    /// candidate stream only grows, so neither estimate can decrease.
    pub fn escalate(&mut self) -> Result<()> {
        self.budget.samples = self.budget.samples.saturating_mul(4);
        let du = delta_u_with(&self.channel, &self.u_target, &self.budget, &self.extras)?;
        let due = delta_ue(&self.channel, &self.u_target, &self.budget)?;
        self.metrics.delta_u = du.value;
        self.metrics.delta_ue = due.value;
        self.metrics.samples_used = du.samples_used;
        self.delta_u_estimate = du;
        self.delta_ue_estimate = due;
        Ok(())
    }
}

/// The extremal states and their equal-weight superpositions. Mixing the
/// two states the gate treats most differently is where the implementation
/// error tends to concentrate, so they seed the `δ_U` search.
fn extremal_candidates(pair: &ExtremalPair) -> Vec<PureState> {
    let (a, b) = (pair.rho_max.amplitudes(), pair.rho_min.amplitudes());
    let mut out = vec![pair.rho_max.clone(), pair.rho_min.clone()];
    for phase in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0)] {
        let v: Vec<C64> = a.iter().zip(b).map(|(x, y)| (x + phase * y) * std::f64::consts::FRAC_1_SQRT_2).collect();
        if let Ok(s) = PureState::normalized(v) {
            out.push(s);
        }
    }
    out
}
