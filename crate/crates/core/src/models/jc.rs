//! Jaynes–Cummings apparatus: a qubit coupled to one bosonic mode that starts
//! in a coherent state.

use super::Model;
use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64};
use crate::quantum::{DensityMatrix, ImplementationSet, PureState};
use crate::tol;

/// Fock-space truncation of the mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FockDim {
    Auto,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcParams {
    pub epsilon: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub tau: f64,
    pub fock_dim: FockDim,
    /// Accept a coherent-state tail above [`tol::TAIL_MAX`].
    pub allow_large_tail: bool,
}

impl JcParams {
    /// The reference spin flip: `ε = 10`, `τ = 1` and `λ = π/(2α)`, so that
    /// `αλτ = π/2` and the target is a full spin flip.
    pub fn spin_flip(alpha: f64) -> Self {
        Self::flip(10.0, 1.0, alpha)
    }

    /// `λ = π/(2ατ)` for given `ε`, `τ` and `α > 0`.
    pub fn flip(epsilon: f64, tau: f64, alpha: f64) -> Self {
        Self {
            epsilon,
            lambda: std::f64::consts::FRAC_PI_2 / (alpha * tau),
            alpha,
            tau,
            fock_dim: FockDim::Auto,
            allow_large_tail: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.epsilon, self.lambda, self.alpha, self.tau]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::invalid("Jaynes–Cummings parameters are finite", format!("{self:?}")));
        }
        if self.epsilon <= 0.0 {
            return Err(Error::invalid("epsilon > 0", format!("epsilon = {}", self.epsilon)));
        }
        if self.lambda < 0.0 {
            return Err(Error::invalid("lambda >= 0", format!("lambda = {}", self.lambda)));
        }
        if self.alpha < 0.0 {
            return Err(Error::invalid("alpha >= 0", format!("alpha = {}", self.alpha)));
        }
        if self.tau < 0.0 {
            return Err(Error::invalid("tau >= 0", format!("tau = {}", self.tau)));
        }
        if self.fock_dim == FockDim::Fixed(0) {
            return Err(Error::invalid("fock_dim >= 1", "fock_dim = 0"));
        }
        Ok(())
    }

    pub fn resolved_fock_dim(&self) -> usize {
        match self.fock_dim {
            FockDim::Fixed(n) => n,
            FockDim::Auto => auto_fock_dim(self.alpha),
        }
    }
}

/// `ln P(n)` for a Poisson distribution of mean `α²`.
fn ln_poisson(alpha: f64, n: usize) -> f64 {
    if alpha == 0.0 {
        return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    -alpha * alpha + 2.0 * nf * alpha.ln() - ln_factorial(n)
}

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

/// Probability mass `Σ_{n ≥ dim} |⟨n|α⟩|²` dropped by truncating at `dim`.
pub fn coherent_tail(alpha: f64, dim: usize) -> f64 {
    let mean = alpha * alpha;
    if (dim as f64) <= mean {
        let head: f64 = (0..dim).map(|n| ln_poisson(alpha, n).exp()).sum();
        return (1.0 - head).max(0.0);
    }
    // past the mode the terms decrease monotonically, so sum until they vanish
    let mut tail = 0.0;
    let mut ln_p = ln_poisson(alpha, dim);
    let mut n = dim;
    loop {
        let p = ln_p.exp();
        tail += p;
        if p <= tail * 1e-17 || p == 0.0 {
            break;
        }
        n += 1;
        ln_p += 2.0 * alpha.ln() - (n as f64).ln();
    }
    tail
}

/// Smallest `N ≥ ⌈α² + 10α + 20⌉` with tail mass at most [`tol::TAIL_AUTO`].
pub fn auto_fock_dim(alpha: f64) -> usize {
    let mut n = (alpha * alpha + 10.0 * alpha + 20.0).ceil() as usize;
    while coherent_tail(alpha, n) > tol::TAIL_AUTO {
        n += 1;
    }
    n
}

/// Truncated coherent state with its discarded tail mass.
#[derive(Clone, Debug)]
pub struct CoherentState {
    pub state: PureState,
    pub tail: f64,
}

/// `|α⟩` on the first `fock_dim` Fock levels, renormalized after truncation.
/// Amplitudes are built in log space so large `α` does not overflow `n!`.
pub fn coherent_state(alpha: f64, fock_dim: usize, allow_large_tail: bool) -> Result<CoherentState> {
    if fock_dim == 0 {
        return Err(Error::invalid("fock_dim >= 1", "fock_dim = 0"));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::invalid("alpha >= 0", format!("alpha = {alpha}")));
    }
    let tail = coherent_tail(alpha, fock_dim);
    if tail > tol::TAIL_MAX && !allow_large_tail {
        return Err(Error::TailMassTooLarge {
            tail,
            limit: tol::TAIL_MAX,
        });
    }
    let amps: Vec<C64> = (0..fock_dim)
        .map(|n| C64::new((0.5 * ln_poisson(alpha, n)).exp(), 0.0))
        .collect();
    Ok(CoherentState {
        state: PureState::normalized(amps)?,
        tail,
    })
}

/// `b` on `dim` levels: `b|n⟩ = √n |n−1⟩`.
pub fn annihilation(dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `σ₊ = |↑⟩⟨↓|` with basis order (↑, ↓).
pub fn sigma_plus() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = C64::new(1.0, 0.0);
    m
}

/// `H_S = ε(σ_z + 1) = diag(2ε, 0)`.
pub fn jc_system_hamiltonian(epsilon: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[2.0 * epsilon, 0.0])
}

fn jc_parts(p: &JcParams) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix, CoherentState)> {
    p.validate()?;
    let n = p.resolved_fock_dim();
    let coherent = coherent_state(p.alpha, n, p.allow_large_tail)?;
    let h_s = jc_system_hamiltonian(p.epsilon);
    let levels: Vec<f64> = (0..n).map(|k| 2.0 * p.epsilon * k as f64).collect();
    let h_e = ComplexMatrix::from_real_diagonal(&levels);
    let b = annihilation(n);
    let sp = sigma_plus();
    let h_se = (&kron(&sp, &b) + &kron(&sp.adjoint(), &b.adjoint())).scale_real(p.lambda);
    Ok((h_s, h_e, h_se, coherent))
}

/// `H_S = ε(σ_z+1)`, `H_E = 2ε b^dag b`, `H_SE = λ(σ₊b + σ₋b^dag)`, `σ_E = |α⟩⟨α|`.
pub fn build_jc(p: &JcParams) -> Result<(ComplexMatrix, ImplementationSet)> {
    let (h_s, h_e, h_se, coherent) = jc_parts(p)?;
    let imp = ImplementationSet::new(h_e, coherent.state.density(), h_se, p.tau)?
        .with_truncation_tail(coherent.tail);
    Ok((h_s, imp))
}

/// Same apparatus with `σ_E` replaced by the Poisson mixture of Fock states,
/// i.e. the coherent state with every off-diagonal element removed.
pub fn build_jc_dephased(p: &JcParams) -> Result<(ComplexMatrix, ImplementationSet)> {
    let (h_s, h_e, h_se, coherent) = jc_parts(p)?;
    let weights: Vec<f64> = coherent.state.amplitudes().iter().map(|z| z.norm_sqr()).collect();
    let sigma = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&weights))?;
    let imp = ImplementationSet::new(h_e, sigma, h_se, p.tau)?.with_truncation_tail(coherent.tail);
    Ok((h_s, imp))
}

/// `U_S = e^{−iτεσ_z} e^{−iταλσ_x}`, the semiclassical limit of the coupled dynamics.
pub fn jc_target_unitary(p: &JcParams) -> ComplexMatrix {
    let a = p.tau * p.epsilon;
    let b = p.tau * p.alpha * p.lambda;
    let z = [C64::from_polar(1.0, -a), C64::from_polar(1.0, a)];
    let (c, s) = (b.cos(), b.sin());
    let x = [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ];
    ComplexMatrix::from_fn(2, 2, |i, j| z[i] * x[i][j])
}

/// Builder and target bundled as a [`Model`].
pub fn jc_model(p: &JcParams) -> Result<Model> {
    let (h_s, imp) = build_jc(p)?;
    let n = imp.dim_e();
    Ok(Model::new(h_s, imp, jc_target_unitary(p))?.with_fock_dim(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, fock: usize) -> JcParams {
        JcParams {
            epsilon: 10.0,
            lambda: 0.1,
            alpha,
            tau: 1.0,
            fock_dim: FockDim::Fixed(fock),
            allow_large_tail: false,
        }
    }

    #[test]
    fn vacuum_for_zero_alpha() {
        let c = coherent_state(0.0, 5, false).unwrap();
        assert_eq!(c.state.amplitudes()[0], C64::new(1.0, 0.0));
        assert_eq!(c.tail, 0.0);
    }

    #[test]
    fn poisson_moments() {
        let n_op: Vec<f64> = (0..30).map(|k| k as f64).collect();
        let n_op = ComplexMatrix::from_real_diagonal(&n_op);
        let c = coherent_state(1.0, 30, false).unwrap();
        let rho = c.state.density();
        assert!((rho.expectation(&n_op).unwrap() - 1.0).abs() < 1e-10);
        let n = auto_fock_dim(3.0);
        let n_op = ComplexMatrix::from_real_diagonal(&(0..n).map(|k| k as f64).collect::<Vec<_>>());
        let rho = coherent_state(3.0, n, false).unwrap().state.density();
        assert!((rho.variance(&n_op).unwrap() - 9.0).abs() < 1e-8);
    }

    #[test]
    fn tail_matches_head_complement() {
        for (alpha, n) in [(2.0, 10), (3.0, 20), (1.0, 4)] {
            let head: f64 = (0..n).map(|k| ln_poisson(alpha, k).exp()).sum();
            assert!((coherent_tail(alpha, n) - (1.0 - head)).abs() < 1e-14);
        }
    }

    #[test]
    fn auto_dim_bounds_tail() {
        let n = auto_fock_dim(10.0);
        assert!(n >= 220);
        assert!(coherent_tail(10.0, n) <= 1e-10);
        assert!(auto_fock_dim(20.0) <= 640);
    }

    #[test]
    fn large_tail_needs_opt_in() {
        assert!(matches!(
            coherent_state(5.0, 10, false),
            Err(Error::TailMassTooLarge { .. })
        ));
        assert!(coherent_state(5.0, 10, true).is_ok());
    }

    #[test]
    fn target_for_full_flip() {
        let p = JcParams::spin_flip(4.0);
        let u = jc_target_unitary(&p);
        // e^{-i10σz}(−iσx)
        let want = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                C64::new(0.0, 0.0)
            } else if i == 0 {
                C64::from_polar(1.0, -10.0) * C64::new(0.0, -1.0)
            } else {
                C64::from_polar(1.0, 10.0) * C64::new(0.0, -1.0)
            }
        });
        assert!((&u - &want).max_abs() < 1e-15);
        assert!(u.unitarity_defect() < 1e-12);
        let mut still = p;
        still.tau = 0.0;
        assert!((&jc_target_unitary(&still) - &ComplexMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn builder_shapes() {
        let (h_s, imp) = build_jc(&params(2.0, 30)).unwrap();
        assert_eq!(h_s.dim(), 2);
        assert_eq!(imp.dim_e(), 30);
        assert_eq!(imp.dim_s(), 2);
        // σ₊ ⊗ b couples |↓, n⟩ to |↑, n−1⟩
        assert!((imp.h_se()[(1, 30 + 2)].re - 0.1 * 2f64.sqrt()).abs() < 1e-15);
    }
}
