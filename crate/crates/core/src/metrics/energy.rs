//! Energy fluctuations of the apparatus.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix, C64};
use crate::quantum::random::random_unitary;
use crate::quantum::{DensityMatrix, SeedStream};
use crate::tol;

/// `δ_E = √(Tr[H_E²σ_E] − Tr[H_Eσ_E]²)`.
pub fn delta_e(sigma_e: &DensityMatrix, h_e: &ComplexMatrix) -> Result<f64> {
    Ok(sigma_e.variance(h_e)?.sqrt())
}

/// Coherent energy fluctuation `δ_EQ`: the least average standard deviation
/// over pure-state decompositions, in closed form
///
/// `δ_EQ² = Σ_{k<l} (λ_k − λ_l)² / (λ_k + λ_l) · |⟨k|H|l⟩|²`
///
/// over the eigendecomposition of `σ_E`, which is a quarter of the quantum
/// Fisher information. Pairs with `λ_k + λ_l` at or below
/// [`tol::QFI_CUTOFF`] are skipped.
pub fn delta_eq(sigma_e: &DensityMatrix, h_e: &ComplexMatrix) -> Result<f64> {
    check(sigma_e, h_e)?;
    if sigma_e.pure_vector().is_some() {
        // only pairs (ψ, ψ⊥) contribute and they sum to the variance
        return delta_e(sigma_e, h_e);
    }
    let eig = herm_eig(sigma_e.matrix())?;
    let v = &eig.eigenvectors;
    let h = &(&v.adjoint() * h_e) * v;
    let lambda: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
    let n = lambda.len();
    let mut sum = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            let s = lambda[k] + lambda[l];
            if s <= tol::QFI_CUTOFF {
                continue;
            }
            let d = lambda[k] - lambda[l];
            sum += d * d / s * h[(k, l)].norm_sqr();
        }
    }
    Ok(sum.sqrt())
}

fn check(sigma_e: &DensityMatrix, h_e: &ComplexMatrix) -> Result<()> {
    if !h_e.is_square() || h_e.dim() != sigma_e.dim() {
        return Err(Error::dims(format!(
            "H is {}x{}, state has dimension {}",
            h_e.rows(),
            h_e.cols(),
            sigma_e.dim()
        )));
    }
    Ok(())
}

/// Brute-force `δ_EQ` by direct minimization over decompositions.
///
/// Every size-`m` decomposition is `ψ̃_j = Σ_k W_jk √λ_k |k⟩` for an `m × r`
/// isometry `W`. The objective `Tr[H²σ] − Σ_j (ψ̃_j^dag H ψ̃_j)² / ‖ψ̃_j‖²` is
/// lowered by sweeps of 2x2 unitaries mixing pairs of rows of `W`, which keep
/// it an isometry. Each pair update only needs the 2x2 Gram and `H` matrices
/// of the two rows. Starts are the canonical decomposition plus Haar-random
/// isometries; the best result is returned, so this is an upper bound.
pub fn delta_eq_oracle(sigma_e: &DensityMatrix, h_e: &ComplexMatrix, ensemble_size: usize, seed: u64) -> Result<f64> {
    delta_eq_oracle_with(sigma_e, h_e, ensemble_size, 64, seed)
}

pub fn delta_eq_oracle_with(
    sigma_e: &DensityMatrix,
    h_e: &ComplexMatrix,
    ensemble_size: usize,
    starts: usize,
    seed: u64,
) -> Result<f64> {
    check(sigma_e, h_e)?;
    let dim = sigma_e.dim();
    if dim > 6 {
        return Err(Error::ScaleTooLarge(format!("dimension {dim} > 6")));
    }
    let support = sigma_e.support(1e-13)?;
    let r = support.len();
    if r > 4 {
        return Err(Error::ScaleTooLarge(format!("rank {r} > 4")));
    }
    let m = ensemble_size.max(r);
    // basis vectors √λ_k |k⟩ and their H matrix elements
    let basis: Vec<Vec<C64>> = support
        .iter()
        .map(|(l, v)| v.iter().map(|z| z * l.sqrt()).collect())
        .collect();
    let hb: Vec<Vec<C64>> = basis.iter().map(|b| h_e.mul_vec(b)).collect();
    let mut gram_h = vec![vec![C64::new(0.0, 0.0); r]; r];
    let mut gram = vec![vec![C64::new(0.0, 0.0); r]; r];
    for a in 0..r {
        for b in 0..r {
            gram_h[a][b] = crate::linalg::inner(&basis[a], &hb[b]);
            gram[a][b] = crate::linalg::inner(&basis[a], &basis[b]);
        }
    }
    let h2: f64 = hb.iter().map(|x| crate::linalg::inner(x, x).re).sum();

    let root = SeedStream::new(seed);
    let mut best = f64::INFINITY;
    for s in 0..starts.max(1) {
        let w: Vec<Vec<C64>> = if s == 0 {
            (0..m).map(|j| (0..r).map(|k| C64::new(if j == k { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
        } else {
            let mut rng = root.child(s as u64).rng();
            let u = random_unitary(&mut rng, m);
            (0..m).map(|j| (0..r).map(|k| u[(j, k)]).collect()).collect()
        };
        let v = minimize_from(w, &gram, &gram_h, h2, root.child(s as u64).child(1).rng());
        best = best.min(v);
    }
    Ok(best.max(0.0).sqrt())
}

/// Row `j` of `W` gives `ψ̃_j = Σ_k W_jk b_k`; returns `(‖ψ̃‖², ψ̃^dag H ψ̃)`.
fn row_moments(row: &[C64], gram: &[Vec<C64>], gram_h: &[Vec<C64>]) -> (f64, f64) {
    let mut n = C64::new(0.0, 0.0);
    let mut h = C64::new(0.0, 0.0);
    for (a, wa) in row.iter().enumerate() {
        for (b, wb) in row.iter().enumerate() {
            let c = wa.conj() * wb;
            n += c * gram[a][b];
            h += c * gram_h[a][b];
        }
    }
    (n.re, h.re)
}

fn term(n: f64, h: f64) -> f64 {
    if n > 1e-300 {
        h * h / n
    } else {
        0.0
    }
}

fn minimize_from<R: Rng>(mut w: Vec<Vec<C64>>, gram: &[Vec<C64>], gram_h: &[Vec<C64>], h2: f64, mut rng: R) -> f64 {
    let m = w.len();
    let objective = |w: &[Vec<C64>]| h2 - w.iter().map(|row| {
        let (n, h) = row_moments(row, gram, gram_h);
        term(n, h)
    }).sum::<f64>();
    let mut current = objective(&w);
    for _sweep in 0..200 {
        let before = current;
        for p in 0..m {
            for q in (p + 1)..m {
                improve_pair(&mut w, p, q, gram, gram_h, h2, &mut rng);
            }
        }
        current = objective(&w);
        if before - current <= 1e-12 * (before.abs() + h2) {
            break;
        }
    }
    current
}

/// Mixes rows `p` and `q` by `[[c, −s e^{-iφ}], [s e^{iφ}, c]]`, choosing
/// `(θ, φ)` by a grid followed by pattern search.
fn improve_pair<R: Rng>(
    w: &mut [Vec<C64>],
    p: usize,
    q: usize,
    gram: &[Vec<C64>],
    gram_h: &[Vec<C64>],
    scale: f64,
    rng: &mut R,
) {
    let (rp, rq) = (w[p].clone(), w[q].clone());
    let mixed = |theta: f64, phi: f64| -> (Vec<C64>, Vec<C64>) {
        let (c, s) = (theta.cos(), theta.sin());
        let e = C64::from_polar(1.0, phi);
        let a: Vec<C64> = rp.iter().zip(&rq).map(|(x, y)| x * c - y * e.conj() * s).collect();
        let b: Vec<C64> = rp.iter().zip(&rq).map(|(x, y)| x * e * s + y * c).collect();
        (a, b)
    };
    let gain = |theta: f64, phi: f64| -> f64 {
        let (a, b) = mixed(theta, phi);
        let (na, ha) = row_moments(&a, gram, gram_h);
        let (nb, hb) = row_moments(&b, gram, gram_h);
        term(na, ha) + term(nb, hb)
    };
    let better = |g: f64, than: f64| g > than + 1e-15 * (than.abs() + scale);
    let mut best = (0.0, 0.0, gain(0.0, 0.0));
    let jitter: f64 = rng.random::<f64>();
    for i in 0..8 {
        for j in 0..8 {
            let theta = std::f64::consts::PI * (i as f64 + jitter) / 8.0;
            let phi = 2.0 * std::f64::consts::PI * (j as f64 + jitter) / 8.0;
            let g = gain(theta, phi);
            if better(g, best.2) {
                best = (theta, phi, g);
            }
        }
    }
    let mut step = std::f64::consts::PI / 16.0;
    let mut budget = 1000;
    while step > 1e-9 && budget > 0 {
        budget -= 1;
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let g = gain(best.0 + dt, best.1 + dp);
            if better(g, best.2) {
                best = (best.0 + dt, best.1 + dp, g);
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    if best.0 != 0.0 {
        let (a, b) = mixed(best.0, best.1);
        w[p] = a;
        w[q] = b;
    }
}
