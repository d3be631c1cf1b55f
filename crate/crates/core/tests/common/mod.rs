//! Slow, independent reference computations.

#![allow(dead_code)]

use uimpl::linalg::{ComplexMatrix, C64};
use uimpl::quantum::{DensityMatrix, QuantumChannel};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `A ⊗ B` straight from `⟨ik|A⊗B|jl⟩ = A_ij B_kl`.
pub fn kron_by_definition(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |r, s| a[(r / br, s / bc)] * b[(r % br, s % bc)])
}

/// `e^{-iHt}` by Taylor series with scaling and squaring.
pub fn exp_taylor(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = h.dim();
    let norm = h.frobenius_norm() * t.abs();
    let mut squarings = 0;
    while norm / f64::from(1u32 << squarings.min(31)) > 0.25 {
        squarings += 1;
    }
    let x = h.scale(c(0.0, -t / f64::powi(2.0, squarings)));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = term.matmul(&x).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    sum
}

/// Largest singular value by power iteration on `A†A`.
pub fn spectral_norm_power(a: &ComplexMatrix) -> f64 {
    let ata = a.adjoint().matmul(a);
    let n = ata.dim();
    let mut v: Vec<C64> = (0..n).map(|i| c(1.0 + 0.1 * i as f64, 0.05 * (i % 3) as f64)).collect();
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let w = ata.mul_vec(&v);
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|z| z / norm).collect();
        if (next - lambda).abs() <= 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

/// Eigenvalues of a 2x2 or 3x3 Hermitian matrix from its characteristic
/// polynomial, ascending.
pub fn charpoly_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    match a.dim() {
        2 => {
            let (p, q) = (a[(0, 0)].re, a[(1, 1)].re);
            let off = a[(0, 1)].norm_sqr();
            let mid = 0.5 * (p + q);
            let r = (0.25 * (p - q) * (p - q) + off).sqrt();
            vec![mid - r, mid + r]
        }
        3 => {
            // Trigonometric solution of the depressed cubic.
            let m = a.trace().re / 3.0;
            let b = a - &ComplexMatrix::identity(3).scale_real(m);
            let p2 = b.matmul(&b).trace().re / 6.0;
            let p = p2.sqrt();
            if p == 0.0 {
                return vec![m; 3];
            }
            let bn = b.scale_real(1.0 / p);
            let det = det3(&bn).re;
            let phi = (det / 2.0).clamp(-1.0, 1.0).acos() / 3.0;
            let tau = std::f64::consts::TAU / 3.0;
            let mut v = vec![
                m + 2.0 * p * phi.cos(),
                m + 2.0 * p * (phi + tau).cos(),
                m + 2.0 * p * (phi + 2.0 * tau).cos(),
            ];
            v.sort_by(f64::total_cmp);
            v
        }
        n => panic!("characteristic polynomial oracle covers 2 and 3, not {n}"),
    }
}

fn det3(a: &ComplexMatrix) -> C64 {
    a[(0, 0)] * (a[(1, 1)] * a[(2, 2)] - a[(1, 2)] * a[(2, 1)]) - a[(0, 1)] * (a[(1, 0)] * a[(2, 2)] - a[(1, 2)] * a[(2, 0)])
        + a[(0, 2)] * (a[(1, 0)] * a[(2, 1)] - a[(1, 1)] * a[(2, 0)])
}

/// `1 − F` for the qubit input at Bloch angles `(θ, φ)`.
pub fn qubit_infidelity(channel: &QuantumChannel, u: &ComplexMatrix, theta: f64, phi: f64) -> f64 {
    let psi = [c((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)];
    let target = u.mul_vec(&psi);
    let p: f64 = channel
        .kraus()
        .iter()
        .map(|k| {
            let out = k.mul_vec(&psi);
            target.iter().zip(&out).map(|(t, o)| t.conj() * o).sum::<C64>().norm_sqr()
        })
        .sum();
    1.0 - p.min(1.0).sqrt()
}

/// Largest qubit `1 − F` on an `n × n` grid of Bloch angles.
pub fn bloch_grid_max(channel: &QuantumChannel, u: &ComplexMatrix, n: usize) -> f64 {
    let mut best = 0.0f64;
    for i in 0..n {
        let theta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let phi = std::f64::consts::TAU * j as f64 / n as f64;
            best = best.max(qubit_infidelity(channel, u, theta, phi));
        }
    }
    best
}

/// `F_e` from an explicit purification `Σ √λ_i |i⟩|i⟩` of `ρ`.
pub fn entanglement_fidelity_purified(channel: &QuantumChannel, u: &ComplexMatrix, rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let support = rho.support(0.0).unwrap();
    let mut psi = vec![c(0.0, 0.0); d * support.len()];
    for (i, (w, v)) in support.iter().enumerate() {
        for s in 0..d {
            psi[s * support.len() + i] = v[s] * w.sqrt();
        }
    }
    let r = support.len();
    let mut total = 0.0;
    for k in channel.kraus() {
        let m = u.adjoint().matmul(k);
        let mut amp = c(0.0, 0.0);
        for s in 0..d {
            for t in 0..d {
                for i in 0..r {
                    amp += psi[s * r + i].conj() * m[(s, t)] * psi[t * r + i];
                }
            }
        }
        total += amp.norm_sqr();
    }
    total.sqrt()
}

/// Largest entry-wise difference.
pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}
