mod common;

use common::*;
use rand::Rng;
use uimpl::linalg::{herm_eig, kron, mat_exp_herm, spectral_norm, ComplexMatrix, Sign};
use uimpl::metrics::{chi, delta_u, entanglement_fidelity, SamplerBudget};
use uimpl::quantum::random::{random_density_hs, random_density_rank, random_hermitian, random_unitary};
use uimpl::quantum::{channel_from_unitary, DensityMatrix, ImplementationSet, QuantumChannel, SeedStream};

fn rng(i: u64) -> rand_chacha::ChaCha8Rng {
    SeedStream::new(1234).child(i).rng()
}

#[test]
fn eigenvalues_match_characteristic_polynomial() {
    for i in 0..200 {
        let mut r = rng(i);
        let d = 2 + (i as usize % 2);
        let h = random_hermitian(&mut r, d, 3.0);
        let got = herm_eig(&h).unwrap().eigenvalues;
        let want = charpoly_eigenvalues(&h);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "{got:?} vs {want:?}");
        }
    }
}

#[test]
fn exponential_matches_taylor_series() {
    for i in 0..50 {
        let mut r = rng(i);
        let d = r.random_range(2..=6);
        let h = random_hermitian(&mut r, d, 1.0);
        let t = r.random_range(0.1..3.0);
        let got = mat_exp_herm(&h, t, Sign::Minus).unwrap();
        assert!(max_diff(&got, &exp_taylor(&h, t)) < 1e-11);
    }
}

#[test]
fn spectral_norm_matches_power_iteration() {
    for i in 0..50 {
        let mut r = rng(i);
        let d = r.random_range(2..=6);
        let a = ComplexMatrix::from_fn(d, d, |_, _| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
        let h = random_hermitian(&mut r, d, 1.0);
        for m in [a, h] {
            let want = spectral_norm_power(&m);
            assert!((spectral_norm(&m).unwrap() - want).abs() < 1e-8 * want.max(1.0));
        }
    }
}

#[test]
fn kron_matches_definition() {
    let mut r = rng(0);
    for (ar, ac, br, bc) in [(2, 2, 3, 3), (1, 3, 2, 1), (3, 2, 2, 4)] {
        let a = ComplexMatrix::from_fn(ar, ac, |_, _| c(r.random(), r.random()));
        let b = ComplexMatrix::from_fn(br, bc, |_, _| c(r.random(), r.random()));
        assert_eq!(kron(&a, &b), kron_by_definition(&a, &b));
    }
}

fn random_qubit_channel(i: u64) -> (QuantumChannel, ComplexMatrix) {
    let mut r = rng(i);
    let de = 2 + i as usize % 2;
    let h = random_hermitian(&mut r, 2 * de, 1.0);
    let u_total = mat_exp_herm(&h, 0.3, Sign::Minus).unwrap();
    let sigma = random_density_rank(&mut r, de, 1 + i as usize % de);
    let ch = channel_from_unitary(&u_total, 2, &sigma).unwrap();
    let u = random_unitary(&mut r, 2);
    (ch, u)
}

#[test]
fn qubit_gate_error_matches_dense_bloch_grid() {
    for i in 0..3 {
        let (ch, u) = random_qubit_channel(i);
        let est = delta_u(&ch, &u, &SamplerBudget::default().with_samples(2000)).unwrap();
        let grid = bloch_grid_max(&ch, &u, 1000);
        // The grid only sees its own points, so it may sit slightly below.
        assert!(est.infidelity >= grid - 1e-12, "{} < {grid}", est.infidelity);
        assert!((est.infidelity - grid) <= 1e-3 * grid, "{} vs {grid}", est.infidelity);
        assert!((est.value.powi(4) - est.infidelity).abs() < 1e-12);
    }
}

#[test]
fn entanglement_fidelity_matches_purification() {
    for i in 0..20 {
        let (ch, u) = random_qubit_channel(i);
        let mut r = rng(100 + i);
        let rho = random_density_hs(&mut r, 2);
        let got = entanglement_fidelity(&ch, &u, &rho).unwrap();
        assert!((got - entanglement_fidelity_purified(&ch, &u, &rho)).abs() < 1e-12);
        let pure = DensityMatrix::maximally_mixed(2);
        let got = entanglement_fidelity(&ch, &u, &pure).unwrap();
        assert!((got - entanglement_fidelity_purified(&ch, &u, &pure)).abs() < 1e-12);
    }
}

/// `χ` from the Taylor-series propagator and a power-iteration norm.
pub fn chi_oracle(free: &ComplexMatrix, total: &ComplexMatrix, tau: f64) -> f64 {
    let u = exp_taylor(total, tau);
    let moved = u.adjoint().matmul(free).matmul(&u);
    spectral_norm_power(&(free - &moved))
}

#[test]
fn chi_matches_independent_construction() {
    for i in 0..10 {
        let mut r = rng(200 + i);
        let (ds, de) = (2, 3);
        let h_s = random_hermitian(&mut r, ds, 1.0);
        let h_e = random_hermitian(&mut r, de, 1.0);
        let h_se = random_hermitian(&mut r, ds * de, 0.5);
        let imp = ImplementationSet::new(h_e, DensityMatrix::maximally_mixed(de), h_se, 0.7).unwrap();
        let free = imp.free_hamiltonian(&h_s).unwrap();
        let total = imp.total_hamiltonian(&h_s).unwrap();
        let got = chi(&free, &imp.total_unitary(&h_s).unwrap()).unwrap();
        let want = chi_oracle(&free, &total, 0.7);
        assert!(want > 1e-3);
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
}
