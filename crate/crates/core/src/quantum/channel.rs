use super::implementation::ImplementationSet;
use super::state::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::tol;

/// A CPTP map in Kraus form.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Validates shapes and `Σ K^dag K = I` to [`tol::TRACE_PRESERVING`].
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::invalid("channel has at least one Kraus operator", "empty list"))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if let Some(k) = kraus.iter().find(|k| k.rows() != dim_out || k.cols() != dim_in) {
            return Err(Error::dims(format!(
                "Kraus operators of shapes {dim_out}x{dim_in} and {}x{}",
                k.rows(),
                k.cols()
            )));
        }
        let ch = Self { dim_in, dim_out, kraus };
        let defect = ch.trace_preservation_defect();
        if defect > tol::TRACE_PRESERVING {
            return Err(Error::invalid(
                "Kraus operators are trace preserving",
                format!("max |Σ K†K − I| = {defect:.3e}"),
            ));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self::unitary(ComplexMatrix::identity(dim))
    }

    /// `ρ ↦ UρU^dag`, without validating `U`.
    pub fn unitary(u: ComplexMatrix) -> Self {
        Self {
            dim_in: u.cols(),
            dim_out: u.rows(),
            kraus: vec![u],
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn trace_preservation_defect(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        (&sum - &ComplexMatrix::identity(self.dim_in)).max_abs()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = match rho.pure_vector() {
            Some(v) => {
                self.check_dim(v.len())?;
                self.apply_pure(v)
            }
            None => self.apply_matrix(rho.matrix())?,
        };
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// `Σ K X K^dag` for any input operator `X`.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !x.is_square() {
            return Err(Error::dims("channel input must be square"));
        }
        self.check_dim(x.dim())?;
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &(&(k * x) * &k.adjoint());
        }
        Ok(out)
    }

    /// `Σ K|ψ⟩⟨ψ|K^dag`.
    pub fn apply_pure(&self, psi: &[C64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            let w = k.mul_vec(psi);
            for i in 0..self.dim_out {
                for j in 0..self.dim_out {
                    out[(i, j)] += w[i] * w[j].conj();
                }
            }
        }
        out
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim_in {
            return Err(Error::dims(format!(
                "channel acts on dimension {} but got {d}",
                self.dim_in
            )));
        }
        Ok(())
    }

    /// Superoperator matrix, `Λ(X)_ab = Σ_cd T[(a,b),(c,d)] X_cd`.
    pub fn transfer_matrix(&self) -> TransferMatrix {
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut t = ComplexMatrix::zeros(dout * dout, di * di);
        for k in &self.kraus {
            for a in 0..dout {
                for c in 0..di {
                    let kac = k[(a, c)];
                    if kac == ZERO {
                        continue;
                    }
                    for b in 0..dout {
                        for d in 0..di {
                            t[(a * dout + b, c * di + d)] += kac * k[(b, d)].conj();
                        }
                    }
                }
            }
        }
        TransferMatrix { dim_in: di, dim_out: dout, t }
    }
}

/// The channel as a single `d_out² × d_in²` matrix.
///
/// Its cost is independent of the number of Kraus operators, which makes it
/// the fast path for repeated evaluation of `⟨φ|Λ(|ψ⟩⟨ψ|)|φ⟩`.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    dim_in: usize,
    dim_out: usize,
    t: ComplexMatrix,
}

impl TransferMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    /// `⟨φ|Λ(|ψ⟩⟨ψ|)|φ⟩`.
    pub fn pure_overlap(&self, phi: &[C64], psi: &[C64]) -> f64 {
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut acc = ZERO;
        for a in 0..dout {
            for b in 0..dout {
                let x = phi[a].conj() * phi[b];
                let row = self.t.row(a * dout + b);
                let mut s = ZERO;
                for c in 0..di {
                    for d in 0..di {
                        s += row[c * di + d] * psi[c] * psi[d].conj();
                    }
                }
                acc += x * s;
            }
        }
        acc.re
    }
}

/// Kraus form of `ρ ↦ Tr_E[U (ρ ⊗ σ_E) U^dag]`.
///
/// With `σ_E = Σ_k q_k |k⟩⟨k|` the operators are `K_(m,k) = √q_k ⟨m|U|k⟩`,
/// `m` running over the standard basis of E. Environment weights below
/// [`tol::KRAUS_WEIGHT_CUTOFF`] are dropped, as are exactly-zero operators.
pub fn channel_from_unitary(
    u_total: &ComplexMatrix,
    dim_s: usize,
    sigma_e: &DensityMatrix,
) -> Result<QuantumChannel> {
    let dim_e = sigma_e.dim();
    let n = dim_s * dim_e;
    if !u_total.is_square() || u_total.dim() != n {
        return Err(Error::dims(format!(
            "joint unitary is {}x{} but S⊗E has dimension {n}",
            u_total.rows(),
            u_total.cols()
        )));
    }
    let mut kraus = Vec::new();
    for (q, k) in sigma_e.support(tol::KRAUS_WEIGHT_CUTOFF)? {
        let w = q.sqrt();
        for m in 0..dim_e {
            let op = ComplexMatrix::from_fn(dim_s, dim_s, |s, t| {
                let row = u_total.row(s * dim_e + m);
                let mut acc = ZERO;
                for (e, ke) in k.iter().enumerate() {
                    acc += row[t * dim_e + e] * ke;
                }
                acc * w
            });
            if op.max_abs() > 0.0 {
                kraus.push(op);
            }
        }
    }
    QuantumChannel::new(kraus)
}

/// The channel `Λ_S` induced on the system by an implementation set.
pub fn induced_channel(h_s: &ComplexMatrix, imp: &ImplementationSet) -> Result<QuantumChannel> {
    let u = imp.total_unitary(h_s)?;
    channel_from_unitary(&u, imp.dim_s(), imp.sigma_e())
}

/// Convenience wrapper matching `apply_channel(ch, ρ)`.
pub fn apply_channel(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron, partial_trace, Keep};
    use crate::quantum::random::{random_density_hs, random_hermitian, random_pure_state, SeedStream};

    #[test]
    fn identity_channel_leaves_state() {
        let rho = random_density_hs(&mut SeedStream::new(1).rng(), 3);
        let out = QuantumChannel::identity(3).apply(&rho).unwrap();
        assert!((out.matrix() - rho.matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn depolarizing_qubit_gives_maximally_mixed() {
        let h = 0.5;
        let paulis = [
            ComplexMatrix::identity(2),
            ComplexMatrix::from_rows(&[vec![ZERO, C64::new(1.0, 0.0)], vec![C64::new(1.0, 0.0), ZERO]]).unwrap(),
            ComplexMatrix::from_rows(&[vec![ZERO, C64::new(0.0, -1.0)], vec![C64::new(0.0, 1.0), ZERO]]).unwrap(),
            ComplexMatrix::from_real_diagonal(&[1.0, -1.0]),
        ];
        let ch = QuantumChannel::new(paulis.iter().map(|p| p.scale_real(h)).collect()).unwrap();
        let rho = random_pure_state(&mut SeedStream::new(2).rng(), 2).density();
        let out = ch.apply(&rho).unwrap();
        assert!((out.matrix() - DensityMatrix::maximally_mixed(2).matrix()).max_abs() < 1e-15);
    }

    #[test]
    fn non_trace_preserving_is_rejected() {
        let k = ComplexMatrix::from_real_diagonal(&[1.0, 0.5]);
        assert!(QuantumChannel::new(vec![k]).is_err());
    }

    #[test]
    fn kraus_action_matches_dense_evolution() {
        let mut rng = SeedStream::new(3).rng();
        let h = random_hermitian(&mut rng, 4, 1.0);
        let u = crate::linalg::mat_exp_herm(&h, 0.7, crate::linalg::Sign::Minus).unwrap();
        let sigma = random_density_hs(&mut rng, 2);
        let ch = channel_from_unitary(&u, 2, &sigma).unwrap();
        let rho = random_density_hs(&mut rng, 2);
        let joint = kron(rho.matrix(), sigma.matrix());
        let dense = partial_trace(&(&(&u * &joint) * &u.adjoint()), 2, 2, Keep::S).unwrap();
        assert!((ch.apply(&rho).unwrap().matrix() - &dense).max_abs() < 1e-12);

        let t = ch.transfer_matrix();
        let psi = random_pure_state(&mut rng, 2);
        let phi = random_pure_state(&mut rng, 2);
        let direct = ch.apply_pure(psi.amplitudes()).expectation(phi.amplitudes()).re;
        assert!((t.pure_overlap(phi.amplitudes(), psi.amplitudes()) - direct).abs() < 1e-14);
    }
}
