//! How much energy the target gate moves, and how well the joint dynamics
//! conserves energy.

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, spectral_norm, ComplexMatrix, C64};
use crate::quantum::{fidelity_factored, DensityMatrix, FactoredState, PureState};
use crate::tol;

fn check_pair(h: &ComplexMatrix, u: &ComplexMatrix) -> Result<()> {
    if !h.is_square() || !u.is_square() || h.dim() != u.dim() {
        return Err(Error::dims(format!(
            "H is {}x{}, U is {}x{}",
            h.rows(),
            h.cols(),
            u.rows(),
            u.cols()
        )));
    }
    Ok(())
}

/// `D = H − U^dag H U`; `Tr[H(ρ − UρU^dag)] = Tr[ρD]`.
pub fn energy_loss_operator(h: &ComplexMatrix, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_pair(h, u)?;
    Ok((h - &(&(&u.adjoint() * h) * u)).hermitian_part())
}

/// `‖[H_S, U_S]‖ = ‖H_S − U_S^dag H_S U_S‖`, the largest energy change the
/// target can cause.
pub fn commutator_norm(h_s: &ComplexMatrix, u_s: &ComplexMatrix) -> Result<f64> {
    spectral_norm(&energy_loss_operator(h_s, u_s)?)
}

/// `χ = ‖[H_S ⊗ I + I ⊗ H_E, U_total]‖`, zero exactly when the joint
/// evolution conserves the free energy.
pub fn chi(free_hamiltonian: &ComplexMatrix, u_total: &ComplexMatrix) -> Result<f64> {
    commutator_norm(free_hamiltonian, u_total)
}

/// `‖H_S‖` with the ground energy set to zero, `λ_max − λ_min`.
pub fn h_s_norm(h_s: &ComplexMatrix) -> Result<f64> {
    let e = herm_eig(h_s)?.eigenvalues;
    Ok(e[e.len() - 1] - e[0])
}

/// Orthogonal pure states that gain and lose the most energy under the target.
#[derive(Clone, Debug)]
pub struct ExtremalPair {
    pub rho_max: PureState,
    pub rho_min: PureState,
    pub gain_max: f64,
    pub gain_min: f64,
    /// Eigenvector indices (ascending order) of the two states.
    pub index_max: usize,
    pub index_min: usize,
}

/// Top and bottom eigenvectors of `D = H_S − U_S^dag H_S U_S`.
///
/// Degenerate extremes resolve to the lowest eigenvector index. If `D` is
/// fully degenerate the two choices would coincide; the maximizer then moves
/// to the next index so the pair stays orthogonal.
pub fn extremal_states(h_s: &ComplexMatrix, u_s: &ComplexMatrix) -> Result<ExtremalPair> {
    let d = energy_loss_operator(h_s, u_s)?;
    let n = d.dim();
    if n < 2 {
        return Err(Error::dims("extremal states need a system of dimension at least 2"));
    }
    let eig = herm_eig(&d)?;
    let top = eig.eigenvalues[n - 1];
    let tie = 1e-12 * d.max_abs().max(1.0);
    let index_min = 0;
    let mut index_max = (0..n).find(|&j| top - eig.eigenvalues[j] <= tie).unwrap_or(n - 1);
    if index_max == index_min {
        index_max = 1;
    }
    Ok(ExtremalPair {
        rho_max: PureState::from_unit_unchecked(eig.vector(index_max)),
        rho_min: PureState::from_unit_unchecked(eig.vector(index_min)),
        gain_max: eig.eigenvalues[index_max],
        gain_min: eig.eigenvalues[index_min],
        index_max,
        index_min,
    })
}

/// `σ'_E = Tr_S[U(|ψ⟩⟨ψ| ⊗ σ_E)U^dag]` as a factored state: each weighted
/// eigenvector of `σ_E` contributes `dim_s` columns.
pub fn final_environment(
    u_total: &ComplexMatrix,
    psi: &PureState,
    sigma_e: &DensityMatrix,
) -> Result<FactoredState> {
    let (ds, de) = (psi.dim(), sigma_e.dim());
    if u_total.dim() != ds * de {
        return Err(Error::dims(format!(
            "joint unitary of dimension {} for {ds}x{de}",
            u_total.dim()
        )));
    }
    let support = sigma_e.support(tol::KRAUS_WEIGHT_CUTOFF)?;
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for (q, k) in &support {
        let joint = crate::linalg::kron_vec(psi.amplitudes(), k);
        let out = u_total.mul_vec(&joint);
        for s in 0..ds {
            cols.push(out[s * de..(s + 1) * de].iter().map(|z| z * q.sqrt()).collect());
        }
    }
    let factor = ComplexMatrix::from_fn(de, cols.len(), |i, j| cols[j][i]);
    Ok(FactoredState::new(factor))
}

/// Energy handed to the apparatus by the two extremal inputs.
#[derive(Clone, Debug)]
pub struct EnergyShift {
    /// `Δ = |Tr[H_E(σ'_max − σ'_min)]|`.
    pub delta: f64,
    /// `δ̃_E = max(δ_E(σ'_max), δ_E(σ'_min))`.
    pub tilde_delta_e: f64,
    /// `L_B(σ'_max, σ'_min)`.
    pub bures_between: f64,
    pub final_max: FactoredState,
    pub final_min: FactoredState,
}

pub fn energy_shift_gap(
    u_total: &ComplexMatrix,
    h_e: &ComplexMatrix,
    sigma_e: &DensityMatrix,
    pair: &ExtremalPair,
) -> Result<EnergyShift> {
    let final_max = final_environment(u_total, &pair.rho_max, sigma_e)?;
    let final_min = final_environment(u_total, &pair.rho_min, sigma_e)?;
    let (m1, v1) = final_max.mean_and_variance(h_e)?;
    let (m2, v2) = final_min.mean_and_variance(h_e)?;
    let f = fidelity_factored(&final_max, &final_min)?;
    Ok(EnergyShift {
        delta: (m1 - m2).abs(),
        tilde_delta_e: v1.sqrt().max(v2.sqrt()),
        bures_between: (1.0 - f).max(0.0).sqrt(),
        final_max,
        final_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_exp_herm, Sign};
    use crate::quantum::random::{random_hermitian, random_unitary};
    use crate::quantum::SeedStream;

    #[test]
    fn identity_target_moves_no_energy() {
        let h = ComplexMatrix::from_real_diagonal(&[2.0, 0.0]);
        assert_eq!(commutator_norm(&h, &ComplexMatrix::identity(2)).unwrap(), 0.0);
        let pair = extremal_states(&h, &ComplexMatrix::identity(2)).unwrap();
        assert_eq!((pair.gain_max, pair.gain_min), (0.0, 0.0));
        assert!(pair.rho_max.overlap(&pair.rho_min).norm() < 1e-15);
    }

    #[test]
    fn commutator_norm_matches_direct_svd() {
        let mut rng = SeedStream::new(21).rng();
        for d in 2..6 {
            let h = random_hermitian(&mut rng, d, 1.0);
            let u = random_unitary(&mut rng, d);
            let direct = spectral_norm(&h.commutator(&u)).unwrap();
            assert!((commutator_norm(&h, &u).unwrap() - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn gains_have_opposite_signs() {
        let mut rng = SeedStream::new(22).rng();
        let h = random_hermitian(&mut rng, 4, 1.0);
        let u = random_unitary(&mut rng, 4);
        let pair = extremal_states(&h, &u).unwrap();
        assert!(pair.gain_max >= 0.0 && pair.gain_min <= 0.0);
        assert!(pair.rho_max.overlap(&pair.rho_min).norm() < 1e-9);
    }

    #[test]
    fn decoupled_evolution_leaves_apparatus_alone() {
        let mut rng = SeedStream::new(23).rng();
        let h_s = random_hermitian(&mut rng, 2, 1.0);
        let h_e = ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 2.0]);
        let free = &crate::linalg::kron(&h_s, &ComplexMatrix::identity(3))
            + &crate::linalg::kron(&ComplexMatrix::identity(2), &h_e);
        let u = mat_exp_herm(&free, 0.8, Sign::Minus).unwrap();
        assert!(chi(&free, &u).unwrap() < 1e-12);
        let sigma = crate::quantum::random::random_density_hs(&mut rng, 3);
        let pair = extremal_states(&h_s, &random_unitary(&mut rng, 2)).unwrap();
        let shift = energy_shift_gap(&u, &h_e, &sigma, &pair).unwrap();
        assert!(shift.delta < 1e-12);
    }
}
