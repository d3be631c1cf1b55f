//! Random models and instances for the certification suites.

use rand::Rng;

use super::inequalities::UnifyInstance;
use crate::error::Result;
use crate::linalg::{herm_eig, inner, kron, mat_exp_herm, partial_trace, ComplexMatrix, Keep, Sign, C64};
use crate::models::Model;
use crate::quantum::random::{random_density_hs, random_hermitian, random_pure_state, random_unitary};
use crate::quantum::{DensityMatrix, ImplementationSet, PureState};

/// Log-uniform sample in `[lo, hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
}

/// Random state: pure half the time, Hilbert–Schmidt mixed otherwise.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    if rng.random_bool(0.5) {
        random_pure_state(rng, dim).density()
    } else {
        random_density_hs(rng, dim)
    }
}

/// `(dim_s, dim_e)` with `dim_s ∈ {2, 3}` and `dim_s · dim_e ≤ max_composite`.
fn random_dims<R: Rng + ?Sized>(rng: &mut R, max_composite: usize) -> (usize, usize) {
    let ds = if max_composite >= 6 && rng.random_bool(0.3) { 3 } else { 2 };
    let de_max = (max_composite / ds).max(2);
    (ds, rng.random_range(2..=de_max))
}

/// Integer spectrum with lowest level 0, rotated into a random basis.
fn random_integer_hamiltonian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let mut levels: Vec<f64> = (0..dim).map(|_| rng.random_range(0..=3) as f64).collect();
    let min = levels.iter().copied().fold(f64::INFINITY, f64::min);
    levels.iter_mut().for_each(|l| *l -= min);
    let v = random_unitary(rng, dim);
    let h = &(&v * &ComplexMatrix::from_real_diagonal(&levels)) * &v.adjoint();
    (h.hermitian_part(), levels, v)
}

/// Unitary closest to `Tr_E[U_total (I ⊗ σ_E)]`: the gate the apparatus
/// implements on average.
fn averaged_target(u_total: &ComplexMatrix, ds: usize, de: usize, sigma: &DensityMatrix) -> Result<ComplexMatrix> {
    let m = partial_trace(&(u_total * &kron(&ComplexMatrix::identity(ds), sigma.matrix())), ds, de, Keep::S)?;
    polar_unitary(&m)
}

/// Unitary factor of the polar decomposition `M = W P`, `W = M (M^dag M)^{-1/2}`.
fn polar_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(&(&m.adjoint() * m).hermitian_part())?;
    let floor = 1e-14 * eig.eigenvalues.last().copied().unwrap_or(1.0).max(1e-300);
    if eig.eigenvalues[0] <= floor {
        // singular average: any unitary will do
        return Ok(ComplexMatrix::identity(m.dim()));
    }
    let inv_sqrt = eig.map(|l| C64::new(1.0 / l.sqrt(), 0.0));
    Ok(m * &inv_sqrt)
}

fn pick_target<R: Rng + ?Sized>(
    rng: &mut R,
    h_s: &ComplexMatrix,
    tau: f64,
    imp: &ImplementationSet,
) -> Result<ComplexMatrix> {
    let u_total = imp.total_unitary(h_s)?;
    let x: f64 = rng.random();
    if x < 0.5 {
        averaged_target(&u_total, imp.dim_s(), imp.dim_e(), imp.sigma_e())
    } else if x < 0.75 {
        mat_exp_herm(h_s, tau, Sign::Minus)
    } else {
        Ok(random_unitary(rng, imp.dim_s()))
    }
}

/// A model whose coupling commutes with `H_S ⊗ I + I ⊗ H_E`.
///
/// Both free Hamiltonians have integer spectra so the free Hamiltonian has
/// large degenerate sectors; the coupling is a random Hermitian matrix
/// restricted to those sectors, with log-uniform strength.
pub fn random_conserving_model<R: Rng + ?Sized>(rng: &mut R, max_composite: usize) -> Result<Model> {
    let (ds, de) = random_dims(rng, max_composite);
    let (h_s, ls, vs) = random_integer_hamiltonian(rng, ds);
    let (h_e, le, ve) = random_integer_hamiltonian(rng, de);
    let n = ds * de;
    let energy: Vec<f64> = (0..n).map(|i| ls[i / de] + le[i % de]).collect();
    let g = log_uniform(rng, 1e-3, 1.0);
    let x = random_hermitian(rng, n, g);
    let block = ComplexMatrix::from_fn(n, n, |i, j| if energy[i] == energy[j] { x[(i, j)] } else { C64::new(0.0, 0.0) });
    let v = kron(&vs, &ve);
    let h_se = (&(&v * &block) * &v.adjoint()).hermitian_part();
    let sigma = random_state(rng, de);
    let tau = rng.random_range(0.5..2.0);
    let imp = ImplementationSet::new(h_e, sigma, h_se, tau)?;
    let u = pick_target(rng, &h_s, tau, &imp)?;
    Model::new(h_s, imp, u)
}

/// A model with an unrestricted (hence non-conserving) coupling of small
/// strength.
pub fn random_nonconserving_model<R: Rng + ?Sized>(rng: &mut R, max_composite: usize) -> Result<Model> {
    let (ds, de) = random_dims(rng, max_composite);
    let (h_s, _, _) = random_integer_hamiltonian(rng, ds);
    let (h_e, _, _) = random_integer_hamiltonian(rng, de);
    let g = log_uniform(rng, 1e-4, 0.3);
    let h_se = random_hermitian(rng, ds * de, g);
    let sigma = random_state(rng, de);
    let tau = rng.random_range(0.5..2.0);
    let imp = ImplementationSet::new(h_e, sigma, h_se, tau)?;
    let u = pick_target(rng, &h_s, tau, &imp)?;
    Model::new(h_s, imp, u)
}

/// Two orthonormal random vectors.
pub fn random_orthonormal_pair<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> (PureState, PureState) {
    let a = random_pure_state(rng, dim);
    loop {
        let b = random_pure_state(rng, dim);
        let c = inner(a.amplitudes(), b.amplitudes());
        let v: Vec<C64> = b.amplitudes().iter().zip(a.amplitudes()).map(|(x, y)| x - c * y).collect();
        if let Ok(b) = PureState::normalized(v) {
            if crate::linalg::vec_norm(b.amplitudes()) > 0.0 {
                return (a, b);
            }
        }
    }
}

/// `(2,2)`, `(2,4)` and `(3,3)` in rotation.
pub const UNIFY_DIMS: [(usize, usize); 3] = [(2, 2), (2, 4), (3, 3)];

/// Instance for the two-system inequality. Most draws are a target gate
/// followed by a joint perturbation `exp(−igK)` of log-uniform strength;
/// one in ten is a Haar-random joint unitary and, for equal dimensions, one
/// in ten is the swap.
pub fn random_unify_instance<R: Rng + ?Sized>(rng: &mut R, dims: (usize, usize)) -> Result<UnifyInstance> {
    let (da, db) = dims;
    let u_a = random_unitary(rng, da);
    let kind: f64 = rng.random();
    let v_ab = if kind < 0.1 {
        random_unitary(rng, da * db)
    } else if kind < 0.2 && da == db {
        swap(da)
    } else {
        let g = log_uniform(rng, 1e-4, 3.0);
        let k = random_hermitian(rng, da * db, 1.0);
        &kron(&u_a, &ComplexMatrix::identity(db)) * &mat_exp_herm(&k, g, Sign::Minus)?
    };
    let (nu1, nu2) = random_orthonormal_pair(rng, da);
    Ok(UnifyInstance {
        dim_a: da,
        dim_b: db,
        v_ab,
        u_a,
        sigma_b: random_pure_state(rng, db),
        nu1,
        nu2,
    })
}

/// `|a⟩|b⟩ ↦ |b⟩|a⟩` on `C^d ⊗ C^d`.
pub fn swap(d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |i, j| {
        let (a, b) = (j / d, j % d);
        if i == b * d + a {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}
