use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{kron, mat_exp_herm, ComplexMatrix, Sign};
use crate::tol;

/// The apparatus side of a gate implementation: its Hilbert space, free
/// Hamiltonian `H_E`, initial state `σ_E`, the coupling `H_SE` and the
/// evolution time `τ`.
///
/// The system Hamiltonian is deliberately not part of the set; the same
/// apparatus can be paired with different `H_S`.
#[derive(Clone, Debug)]
pub struct ImplementationSet {
    h_e: ComplexMatrix,
    sigma_e: DensityMatrix,
    h_se: ComplexMatrix,
    tau: f64,
    truncation_tail: f64,
}

impl ImplementationSet {
    pub fn new(h_e: ComplexMatrix, sigma_e: DensityMatrix, h_se: ComplexMatrix, tau: f64) -> Result<Self> {
        h_e.ensure_hermitian(tol::HERMITIAN)
            .map_err(|e| Error::invalid("H_E is Hermitian", e.to_string()))?;
        h_se.ensure_hermitian(tol::HERMITIAN)
            .map_err(|e| Error::invalid("H_SE is Hermitian", e.to_string()))?;
        let dim_e = h_e.dim();
        if sigma_e.dim() != dim_e {
            return Err(Error::invalid(
                "sigma_E matches H_E",
                format!("sigma_E has dimension {} but H_E has {dim_e}", sigma_e.dim()),
            ));
        }
        if h_se.dim() % dim_e != 0 || h_se.dim() == 0 {
            return Err(Error::invalid(
                "H_SE acts on S⊗E",
                format!("dimension {} is not a multiple of dim_E = {dim_e}", h_se.dim()),
            ));
        }
        if !tau.is_finite() || tau < 0.0 {
            return Err(Error::invalid("tau is finite and non-negative", format!("tau = {tau}")));
        }
        Ok(Self {
            h_e: h_e.hermitian_part(),
            sigma_e,
            h_se: h_se.hermitian_part(),
            tau,
            truncation_tail: 0.0,
        })
    }

    /// Records the probability mass lost by truncating an infinite-dimensional
    /// apparatus.
    pub fn with_truncation_tail(mut self, tail: f64) -> Self {
        self.truncation_tail = tail;
        self
    }

    pub fn dim_e(&self) -> usize {
        self.h_e.dim()
    }

    pub fn dim_s(&self) -> usize {
        self.h_se.dim() / self.dim_e()
    }

    pub fn h_e(&self) -> &ComplexMatrix {
        &self.h_e
    }

    pub fn sigma_e(&self) -> &DensityMatrix {
        &self.sigma_e
    }

    pub fn h_se(&self) -> &ComplexMatrix {
        &self.h_se
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn truncation_tail(&self) -> f64 {
        self.truncation_tail
    }

    fn check_system(&self, h_s: &ComplexMatrix) -> Result<()> {
        if !h_s.is_square() || h_s.dim() != self.dim_s() {
            return Err(Error::dims(format!(
                "H_S is {}x{} but the coupling implies dim_S = {}",
                h_s.rows(),
                h_s.cols(),
                self.dim_s()
            )));
        }
        Ok(())
    }

    /// `H_S ⊗ I + I ⊗ H_E`.
    pub fn free_hamiltonian(&self, h_s: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_system(h_s)?;
        Ok(&kron(h_s, &ComplexMatrix::identity(self.dim_e()))
            + &kron(&ComplexMatrix::identity(self.dim_s()), &self.h_e))
    }

    /// `H = H_S ⊗ I + H_SE + I ⊗ H_E`.
    pub fn total_hamiltonian(&self, h_s: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(&self.free_hamiltonian(h_s)? + &self.h_se)
    }

    /// `e^{-iHτ}`.
    pub fn total_unitary(&self, h_s: &ComplexMatrix) -> Result<ComplexMatrix> {
        mat_exp_herm(&self.total_hamiltonian(h_s)?, self.tau, Sign::Minus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::channel::induced_channel;
    use crate::quantum::random::{random_density_hs, random_hermitian, SeedStream};

    #[test]
    fn decoupled_evolution_is_conjugation() {
        let mut rng = SeedStream::new(4).rng();
        let h_s = random_hermitian(&mut rng, 2, 1.0);
        let h_e = random_hermitian(&mut rng, 3, 1.0);
        let sigma = random_density_hs(&mut rng, 3);
        let imp = ImplementationSet::new(h_e, sigma, ComplexMatrix::zeros(6, 6), 0.9).unwrap();
        let ch = induced_channel(&h_s, &imp).unwrap();
        let u = mat_exp_herm(&h_s, 0.9, Sign::Minus).unwrap();
        let rho = random_density_hs(&mut rng, 2);
        let want = &(&u * rho.matrix()) * &u.adjoint();
        assert!((ch.apply(&rho).unwrap().matrix() - &want).max_abs() < 1e-12);
    }

    #[test]
    fn zero_time_is_identity_channel() {
        let mut rng = SeedStream::new(5).rng();
        let h_s = random_hermitian(&mut rng, 2, 1.0);
        let imp = ImplementationSet::new(
            random_hermitian(&mut rng, 2, 1.0),
            random_density_hs(&mut rng, 2),
            random_hermitian(&mut rng, 4, 1.0),
            0.0,
        )
        .unwrap();
        let rho = random_density_hs(&mut rng, 2);
        let out = induced_channel(&h_s, &imp).unwrap().apply(&rho).unwrap();
        assert!((out.matrix() - rho.matrix()).max_abs() < 1e-13);
    }

    #[test]
    fn invariants_are_named() {
        let err = ImplementationSet::new(
            ComplexMatrix::identity(2),
            DensityMatrix::maximally_mixed(3),
            ComplexMatrix::zeros(4, 4),
            1.0,
        )
        .unwrap_err();
        assert!(err.to_string().contains("sigma_E"));
    }
}
