//! Simulation and verification toolkit for unitary gates that are realised as
//! the joint dynamics of a system `S` and an external apparatus `E`.
//!
//! The crate computes the accuracy of such an implementation (the worst-case
//! Bures error `δ_U` and its entanglement-fidelity variant `δ_Ue`), the energy
//! fluctuation of the apparatus (`δ_E` and its coherent part `δ_EQ`), the
//! energy-change budget `‖[H_S, U_S]‖` and the conservation defect `χ`, and
//! certifies the accuracy/fluctuation trade-off inequalities that tie them
//! together.
//!
//! Subsystem ordering is `S ⊗ E` everywhere: in a composite index
//! `s * dim_e + e`, the system index is the slow (outer) one.
//!
//! Module map:
//! - [`linalg`]: dense complex matrices and the Hermitian eigen kernel.
//! - [`quantum`]: states, channels, fidelity, random sampling, implementation sets.
//! - [`models`]: Jaynes–Cummings builder and the model-file loader.
//! - [`metrics`]: every scalar diagnostic.
//! - [`harness`]: inequality verdicts and randomized certification suites.
//! - [`cli`]: the `uimpl` command line and its report formats.

pub mod cli;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod quantum;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEig, C64};
