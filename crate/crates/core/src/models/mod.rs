//! Concrete gate implementations and the model-file format.

mod file;
pub mod jc;

pub use file::{load_model, MatrixSpec, ModelSpec};
pub use jc::{
    annihilation, auto_fock_dim, build_jc, build_jc_dephased, coherent_state, coherent_tail, jc_model,
    jc_system_hamiltonian, jc_target_unitary, sigma_plus, CoherentState, FockDim, JcParams,
};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::quantum::ImplementationSet;
use crate::tol;

/// System Hamiltonian, apparatus and target unitary: everything needed to
/// evaluate how well the apparatus implements the target.
#[derive(Clone, Debug)]
pub struct Model {
    h_s: ComplexMatrix,
    imp: ImplementationSet,
    u_target: ComplexMatrix,
    fock_dim: Option<usize>,
}

impl Model {
    pub fn new(h_s: ComplexMatrix, imp: ImplementationSet, u_target: ComplexMatrix) -> Result<Self> {
        h_s.ensure_hermitian(tol::HERMITIAN)
            .map_err(|e| Error::invalid("H_S is Hermitian", e.to_string()))?;
        if h_s.dim() != imp.dim_s() {
            return Err(Error::invalid(
                "H_S matches the coupling",
                format!("H_S has dimension {} but dim_S = {}", h_s.dim(), imp.dim_s()),
            ));
        }
        if !u_target.is_square() || u_target.dim() != h_s.dim() {
            return Err(Error::invalid(
                "U_S acts on S",
                format!("U_S is {}x{}, dim_S = {}", u_target.rows(), u_target.cols(), h_s.dim()),
            ));
        }
        let defect = u_target.unitarity_defect();
        if defect > tol::UNITARY {
            return Err(Error::invalid("U_S is unitary", format!("max |U†U − I| = {defect:.3e}")));
        }
        Ok(Self {
            h_s: h_s.hermitian_part(),
            imp,
            u_target,
            fock_dim: None,
        })
    }

    /// Marks the apparatus as a truncated bosonic mode.
    pub fn with_fock_dim(mut self, n: usize) -> Self {
        self.fock_dim = Some(n);
        self
    }

    pub fn fock_dim(&self) -> Option<usize> {
        self.fock_dim
    }

    pub fn h_s(&self) -> &ComplexMatrix {
        &self.h_s
    }

    pub fn imp(&self) -> &ImplementationSet {
        &self.imp
    }

    pub fn u_target(&self) -> &ComplexMatrix {
        &self.u_target
    }

    pub fn dim_s(&self) -> usize {
        self.h_s.dim()
    }

    pub fn dim_e(&self) -> usize {
        self.imp.dim_e()
    }
}
