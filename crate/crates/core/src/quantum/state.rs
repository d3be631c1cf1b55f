use crate::error::{Error, Result};
use crate::linalg::{herm_eig, herm_eig_with, inner, vec_norm, ComplexMatrix, C64};
use crate::tol::{self, Tolerances};

/// Unit vector in `C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amps: Vec<C64>,
}

impl PureState {
    /// Accepts amplitudes whose norm is 1 to within [`tol::PURE_NORM`].
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        check_amplitudes(&amps)?;
        let norm = vec_norm(&amps);
        if (norm - 1.0).abs() > tol::PURE_NORM {
            return Err(Error::invalid(
                "pure state has unit norm",
                format!("norm is {norm:.12}"),
            ));
        }
        Ok(Self { amps })
    }

    /// Rescales any nonzero vector to unit norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        check_amplitudes(&amps)?;
        let norm = vec_norm(&amps);
        if norm == 0.0 {
            return Err(Error::invalid("pure state has unit norm", "zero vector"));
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Ok(Self { amps })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[k] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub(crate) fn from_unit_unchecked(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        inner(&self.amps, &other.amps)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

fn check_amplitudes(amps: &[C64]) -> Result<()> {
    if amps.is_empty() {
        return Err(Error::invalid("pure state has positive dimension", "empty vector"));
    }
    if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

/// Positive semidefinite, unit-trace operator.
///
/// States built from a vector remember it, so expectation values and
/// fidelities against them skip the eigendecomposition.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    pure: Option<Vec<C64>>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::new_with_tol(matrix, &Tolerances::default())
    }

    pub fn new_with_tol(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        matrix.ensure_hermitian(tol.state)?;
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol.state {
            return Err(Error::invalid("density matrix has unit trace", format!("trace is {tr:.12}")));
        }
        let min = herm_eig_with(&matrix, tol)?.eigenvalues[0];
        if min < -tol.state {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        Ok(Self { matrix, pure: None })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes().to_vec();
        Self {
            matrix: ComplexMatrix::outer(&v, &v),
            pure: Some(v),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            pure: None,
        }
    }

    /// Wraps an operator already known to be a state (e.g. a channel output);
    /// only the Hermitian part is kept.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
            pure: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// The state vector, if this state was built from one.
    pub fn pure_vector(&self) -> Option<&[C64]> {
        self.pure.as_deref()
    }

    /// Eigenpairs with weight above `cutoff`, heaviest first.
    pub fn support(&self, cutoff: f64) -> Result<Vec<(f64, Vec<C64>)>> {
        if let Some(v) = &self.pure {
            return Ok(vec![(1.0, v.clone())]);
        }
        let eig = herm_eig(&self.matrix)?;
        Ok((0..self.dim())
            .rev()
            .filter(|&j| eig.eigenvalues[j] > cutoff)
            .map(|j| (eig.eigenvalues[j], eig.vector(j)))
            .collect())
    }

    /// `Tr[Aρ]`.
    pub fn expectation(&self, a: &ComplexMatrix) -> Result<f64> {
        self.check_operator(a)?;
        Ok(match &self.pure {
            Some(v) => a.expectation(v).re,
            None => self.matrix.trace_product(a).re,
        })
    }

    /// `Tr[A²ρ] − Tr[Aρ]²`, clamped at zero. This is the square of the
    /// standard deviation `δ_A(ρ)`.
    pub fn variance(&self, a: &ComplexMatrix) -> Result<f64> {
        self.check_operator(a)?;
        let (mean, second) = match &self.pure {
            Some(v) => {
                let av = a.mul_vec(v);
                (inner(v, &av).re, inner(&av, &av).re)
            }
            None => {
                let ar = &self.matrix * a;
                (ar.trace().re, ar.trace_product(a).re)
            }
        };
        Ok((second - mean * mean).max(0.0))
    }

    fn check_operator(&self, a: &ComplexMatrix) -> Result<()> {
        if !a.is_square() || a.dim() != self.dim() {
            return Err(Error::dims(format!(
                "operator is {}x{} but the state has dimension {}",
                a.rows(),
                a.cols(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// `variance` as a free function, argument order `(ρ, A)`.
pub fn variance(rho: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    rho.variance(a)
}

/// Uhlmann fidelity `F = Tr √(√ρ₁ ρ₂ √ρ₁)`, not squared.
///
/// When either state is pure this reduces to `√⟨ψ|ρ|ψ⟩`, which is used
/// directly. In the general case eigenvalues of `√ρ₁ ρ₂ √ρ₁` below a small
/// dimension-scaled floor are treated as zero: they are rounding noise, and
/// their square roots would otherwise add up to ~1e-8 of spurious fidelity.
pub fn fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::dims(format!(
            "fidelity between dimensions {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let f = match (rho1.pure_vector(), rho2.pure_vector()) {
        (Some(a), Some(b)) => inner(a, b).norm(),
        (Some(a), None) => rho2.matrix().expectation(a).re.max(0.0).sqrt(),
        (None, Some(b)) => rho1.matrix().expectation(b).re.max(0.0).sqrt(),
        (None, None) => {
            let s = crate::linalg::mat_sqrt_psd(rho1.matrix())?;
            let m = (&(&s * rho2.matrix()) * &s).hermitian_part();
            let floor = 1e-15 * rho1.dim() as f64;
            herm_eig(&m)?
                .eigenvalues
                .iter()
                .filter(|&&l| l > floor)
                .map(|l| l.sqrt())
                .sum()
        }
    };
    Ok(f.clamp(0.0, 1.0))
}

/// Bures distance in the convention `L_B = √(1 − F)`.
pub fn bures_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    Ok(one_minus_fidelity(fidelity(rho1, rho2)?).sqrt())
}

/// A state stored as `ρ = BB^dag` with a thin factor `B` (d x k).
///
/// Reduced states of pure joint states have rank at most the dimension of
/// the traced-out factor, so a large apparatus state after a qubit gate is
/// cheap to hold and to compare in this form.
#[derive(Clone, Debug)]
pub struct FactoredState {
    factor: ComplexMatrix,
}

impl FactoredState {
    /// `factor` must satisfy `Tr(BB^dag) = 1`; this is not rechecked.
    pub fn new(factor: ComplexMatrix) -> Self {
        Self { factor }
    }

    pub fn dim(&self) -> usize {
        self.factor.rows()
    }

    pub fn factor(&self) -> &ComplexMatrix {
        &self.factor
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(&self.factor * &self.factor.adjoint())
    }

    /// `(Tr[Aρ], Tr[A²ρ] − Tr[Aρ]²)`.
    pub fn mean_and_variance(&self, a: &ComplexMatrix) -> Result<(f64, f64)> {
        if !a.is_square() || a.dim() != self.dim() {
            return Err(Error::dims("operator and factored state differ in dimension"));
        }
        let (mut mean, mut second) = (0.0, 0.0);
        for j in 0..self.factor.cols() {
            let b = self.factor.column(j);
            let ab = a.mul_vec(&b);
            mean += inner(&b, &ab).re;
            second += inner(&ab, &ab).re;
        }
        Ok((mean, (second - mean * mean).max(0.0)))
    }
}

/// `F(BB^dag, CC^dag) = ‖B^dag C‖₁`, the sum of singular values of a k x k' matrix.
pub fn fidelity_factored(x: &FactoredState, y: &FactoredState) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::dims("fidelity between factored states of different dimension"));
    }
    let m = &x.factor.adjoint() * &y.factor;
    let gram = (&m.adjoint() * &m).hermitian_part();
    let floor = 1e-15 * gram.dim() as f64;
    let f: f64 = herm_eig(&gram)?
        .eigenvalues
        .iter()
        .filter(|&&l| l > floor)
        .map(|l| l.sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `1 − F`, never negative.
fn one_minus_fidelity(f: f64) -> f64 {
    (1.0 - f).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(re: &[f64]) -> PureState {
        PureState::normalized(re.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn pure_state_requires_unit_norm() {
        assert!(PureState::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).is_err());
        assert!(PureState::new(vec![]).is_err());
        assert!(PureState::normalized(vec![C64::new(0.0, 0.0)]).is_err());
    }

    #[test]
    fn density_invariants_are_checked() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let bad = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NotPsd { .. })));
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.25, 0.75])).is_ok());
    }

    #[test]
    fn fidelity_examples() {
        let zero = ket(&[1.0, 0.0]).density();
        let one = ket(&[0.0, 1.0]).density();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        let f = fidelity(&zero, &mixed).unwrap();
        assert!((f - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let l = bures_distance(&zero, &mixed).unwrap();
        assert!((l - (1.0 - std::f64::consts::FRAC_1_SQRT_2).sqrt()).abs() < 1e-15);
        // the general path agrees with the pure shortcut
        let zero_dense = DensityMatrix::new(zero.matrix().clone()).unwrap();
        assert!((fidelity(&zero_dense, &mixed).unwrap() - f).abs() < 1e-12);
        assert!((fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn variance_examples() {
        let z = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert_eq!(variance(&ket(&[1.0, 0.0]).density(), &z).unwrap(), 0.0);
        assert!((variance(&DensityMatrix::maximally_mixed(2), &z).unwrap() - 1.0).abs() < 1e-15);
        let h = ComplexMatrix::from_real_diagonal(&[0.0, 2.0]);
        assert!((variance(&ket(&[1.0, 1.0]).density(), &h).unwrap() - 1.0).abs() < 1e-14);
        assert!(variance(&DensityMatrix::maximally_mixed(3), &h).is_err());
    }
}
