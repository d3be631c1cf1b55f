//! Numerical tolerances used across the crate.
//!
//! Every value here is a default; functions with a `_with` variant accept a
//! [`Tolerances`] to override them per call.

/// Max entrywise asymmetry accepted as Hermitian, relative to `max(1, ‖A‖_max)`.
pub const HERMITIAN: f64 = 1e-9;
/// Eigenvalues above `-PSD_CLAMP` are clamped to zero before a square root.
pub const PSD_CLAMP: f64 = 1e-10;
/// Eigenvalues below `-PSD_REJECT` make a matrix "not PSD".
pub const PSD_REJECT: f64 = 1e-8;
/// Trace / Hermiticity / positivity tolerance of a density matrix.
pub const STATE: f64 = 1e-9;
/// Norm tolerance of a pure state.
pub const PURE_NORM: f64 = 1e-10;
/// Entrywise tolerance for `sum K^dag K = I`.
pub const TRACE_PRESERVING: f64 = 1e-8;
/// Entrywise tolerance for `U^dag U = I` on user-supplied unitaries.
pub const UNITARY: f64 = 1e-9;
/// Environment eigenvalues below this are dropped from the Kraus construction.
pub const KRAUS_WEIGHT_CUTOFF: f64 = 1e-12;
/// Eigenvalue pairs with `λ_k + λ_l` at or below this are excluded from the QFI sum.
pub const QFI_CUTOFF: f64 = 1e-12;
/// Absolute slack in inequality verdicts (scaled by `max(1, |rhs|)`).
pub const CHECK_SLACK: f64 = 1e-12;
/// `χ ≤ CONSERVATION_GATE · ‖[H_S, U_S]‖` counts as energy conserving.
pub const CONSERVATION_GATE: f64 = 1e-6;
/// Coherent-state tail mass targeted by automatic Fock truncation.
pub const TAIL_AUTO: f64 = 1e-10;
/// Largest tail mass accepted without an explicit opt-in.
pub const TAIL_MAX: f64 = 1e-6;

/// Per-call overrides for the defaults above.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd_clamp: f64,
    pub psd_reject: f64,
    pub state: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN,
            psd_clamp: PSD_CLAMP,
            psd_reject: PSD_REJECT,
            state: STATE,
        }
    }
}
