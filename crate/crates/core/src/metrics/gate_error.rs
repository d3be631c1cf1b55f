//! Worst-case implementation error of a channel against a target unitary.
//!
//! Both estimators are maximizations done by sampling followed by local
//! refinement, so they return lower bounds on the true maximum. Candidates
//! form a fixed stream (explicit extras, then a deterministic grid, then
//! seeded random states); they are evaluated in parallel but scanned in stream
//! order, and every candidate that sets a new record is refined. A bigger
//! budget only appends to the stream, so estimates never decrease with the
//! budget, and the result does not depend on the number of worker threads.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{inner, vec_norm, ComplexMatrix, C64};
use crate::quantum::random::{complex_gaussian, random_pure_state};
use crate::quantum::{DensityMatrix, PureState, QuantumChannel, SeedStream};

/// Sampling budget shared by the `δ_U` and `δ_Ue` estimators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerBudget {
    /// Random candidates.
    pub samples: usize,
    pub seed: u64,
    /// Coordinate-ascent sweeps per refined candidate.
    pub refine_sweeps: usize,
    pub initial_step: f64,
    pub step_decay: f64,
    /// Polar x azimuthal Bloch grid, used for qubits only.
    pub bloch_grid: (usize, usize),
}

impl Default for SamplerBudget {
    fn default() -> Self {
        Self {
            samples: 20_000,
            seed: 42,
            refine_sweeps: 20,
            initial_step: 0.1,
            step_decay: 0.7,
            bloch_grid: (120, 240),
        }
    }
}

impl SamplerBudget {
    pub fn with_samples(self, samples: usize) -> Self {
        Self { samples, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.refine_sweeps).map(|k| self.initial_step * self.step_decay.powi(k as i32))
    }
}

#[derive(Clone, Debug)]
pub struct DeltaUEstimate {
    /// `δ_U = (1 − F)^{1/4}` at the best state found.
    pub value: f64,
    /// `1 − F` at `argmax_state`.
    pub infidelity: f64,
    pub argmax_state: PureState,
    pub samples_used: usize,
    /// Whether refinement improved on the best raw candidate.
    pub refined: bool,
}

/// `1 − F(Λ(|ψ⟩⟨ψ|), U|ψ⟩⟨ψ|U^dag)`.
///
/// With `φ = Uψ`, `F = √p` for `p = ⟨φ|Λ(|ψ⟩⟨ψ|)|φ⟩`. Rather than forming
/// `1 − p` by subtraction, the leaked weight `Σ_i ‖(I − |φ⟩⟨φ|) K_i ψ‖²` is
/// summed directly. `δ_U` is a fourth root of this quantity, so cancellation
/// at the 1e-16 level would otherwise put a 1e-4 floor under every estimate.
struct GateObjective<'a> {
    kraus: &'a [ComplexMatrix],
    u: &'a ComplexMatrix,
}

impl GateObjective<'_> {
    fn eval(&self, psi: &[C64]) -> f64 {
        let phi = self.u.mul_vec(psi);
        let mut leaked = 0.0;
        let mut kept = 0.0;
        for k in self.kraus {
            let w = k.mul_vec(psi);
            let c = inner(&phi, &w);
            kept += c.norm_sqr();
            leaked += w
                .iter()
                .zip(&phi)
                .map(|(x, f)| (x - c * f).norm_sqr())
                .sum::<f64>();
        }
        let p = kept.clamp(0.0, 1.0);
        // 1 − √p = (1 − p)/(1 + √p)
        (leaked.min(1.0) / (1.0 + p.sqrt())).max(0.0)
    }
}

fn check_target(channel: &QuantumChannel, u_s: &ComplexMatrix) -> Result<()> {
    let d = channel.dim_in();
    if channel.dim_out() != d || !u_s.is_square() || u_s.dim() != d {
        return Err(Error::dims(format!(
            "channel {}→{} against a {}x{} target",
            channel.dim_in(),
            channel.dim_out(),
            u_s.rows(),
            u_s.cols()
        )));
    }
    Ok(())
}

/// Point `(θ_i, φ_j)` of the Bloch grid: `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`,
/// with `θ` including both poles.
fn bloch_point(i: usize, j: usize, (nt, np): (usize, usize)) -> Vec<C64> {
    let theta = if nt > 1 { PI * i as f64 / (nt - 1) as f64 } else { 0.0 };
    let phi = 2.0 * PI * j as f64 / np as f64;
    vec![
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// `δ_U = [max_ρ L_B(Λ(ρ), UρU^dag)]^{1/2}`, i.e. `δ_U⁴ = max (1 − F)`.
///
/// The maximum is taken over pure states only: fidelity is jointly concave,
/// so `1 − F` is convex in `ρ` and peaks at an extreme point.
pub fn delta_u(channel: &QuantumChannel, u_s: &ComplexMatrix, budget: &SamplerBudget) -> Result<DeltaUEstimate> {
    delta_u_with(channel, u_s, budget, &[])
}

/// [`delta_u`] with extra candidate states evaluated ahead of the stream.
pub fn delta_u_with(
    channel: &QuantumChannel,
    u_s: &ComplexMatrix,
    budget: &SamplerBudget,
    extras: &[PureState],
) -> Result<DeltaUEstimate> {
    check_target(channel, u_s)?;
    if budget.samples == 0 {
        return Err(Error::BudgetZero);
    }
    let d = u_s.dim();
    if let Some(bad) = extras.iter().find(|s| s.dim() != d) {
        return Err(Error::dims(format!("extra candidate of dimension {} for a {d}-level system", bad.dim())));
    }
    let obj = GateObjective {
        kraus: channel.kraus(),
        u: u_s,
    };

    let grid = if d == 2 { budget.bloch_grid.0 * budget.bloch_grid.1 } else { 0 };
    let n_extra = extras.len();
    let total = n_extra + grid + budget.samples;
    let root = SeedStream::new(budget.seed);
    let candidate = |idx: usize| -> Vec<C64> {
        if idx < n_extra {
            extras[idx].amplitudes().to_vec()
        } else if idx < n_extra + grid {
            let g = idx - n_extra;
            bloch_point(g / budget.bloch_grid.1, g % budget.bloch_grid.1, budget.bloch_grid)
        } else {
            let k = (idx - n_extra - grid) as u64;
            random_pure_state(&mut root.child(k).rng(), d).into_amplitudes()
        }
    };

    let values: Vec<f64> = (0..total).into_par_iter().map(|i| obj.eval(&candidate(i))).collect();

    let mut best = f64::NEG_INFINITY;
    let mut best_state = Vec::new();
    let mut refined = false;
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            let (r_state, r_val) = refine_pure(&obj, candidate(i), v, budget);
            refined = r_val > v;
            best = r_val;
            best_state = r_state;
        }
    }
    Ok(DeltaUEstimate {
        value: best.max(0.0).powf(0.25),
        infidelity: best.max(0.0),
        argmax_state: PureState::from_unit_unchecked(best_state),
        samples_used: total,
        refined,
    })
}

/// Coordinate ascent on the unit sphere. Each move rotates `ψ` towards the
/// component of `e_k` or `i·e_k` orthogonal to it; a move that helps is
/// repeated along the same direction before moving on.
fn refine_pure(obj: &GateObjective, mut psi: Vec<C64>, mut value: f64, budget: &SamplerBudget) -> (Vec<C64>, f64) {
    let d = psi.len();
    for step in budget.steps() {
        for k in 0..2 * d {
            let mut dir = vec![C64::new(0.0, 0.0); d];
            dir[k / 2] = if k % 2 == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
            let overlap: C64 = psi.iter().zip(&dir).map(|(p, e)| p.conj() * e).sum();
            dir.iter_mut().zip(&psi).for_each(|(e, p)| *e -= overlap * p);
            let n = vec_norm(&dir);
            if n < 1e-12 {
                continue;
            }
            dir.iter_mut().for_each(|e| *e /= n);
            for s in [step, -step] {
                let mut moved = false;
                for _ in 0..8 {
                    let trial = rotate(&psi, &dir, s);
                    let v = obj.eval(&trial);
                    if v > value {
                        psi = trial;
                        value = v;
                        moved = true;
                        // keep `dir` orthogonal to the new ψ
                        let o: C64 = psi.iter().zip(&dir).map(|(p, e)| p.conj() * e).sum();
                        dir.iter_mut().zip(&psi).for_each(|(e, p)| *e -= o * p);
                        let n = vec_norm(&dir);
                        if n < 1e-12 {
                            break;
                        }
                        dir.iter_mut().for_each(|e| *e /= n);
                    } else {
                        break;
                    }
                }
                if moved {
                    break;
                }
            }
        }
    }
    (psi, value)
}

fn rotate(psi: &[C64], dir: &[C64], s: f64) -> Vec<C64> {
    let (c, sn) = (s.cos(), s.sin());
    let mut out: Vec<C64> = psi.iter().zip(dir).map(|(p, e)| p * c + e * sn).collect();
    let n = vec_norm(&out);
    out.iter_mut().for_each(|z| *z /= n);
    out
}

#[derive(Clone, Debug)]
pub struct DeltaUeEstimate {
    /// `max_ρ arccos F_e`.
    pub value: f64,
    pub argmax_state: DensityMatrix,
    pub samples_used: usize,
}

/// Entanglement fidelity of `Λ_{U^dag} ∘ Λ` as a quadratic form in `vec(ρ)`.
///
/// `F_e² = Σ_i |Tr(ρ U^dag K_i)|² = vec(ρ)ᵀ G conj(vec(ρ))` with
/// `G = Σ_i m_i m_i^dag` and `m_i = vec((U^dag K_i)ᵀ)`.
struct EntanglementObjective {
    g: ComplexMatrix,
}

impl EntanglementObjective {
    fn new(channel: &QuantumChannel, u_s: &ComplexMatrix) -> Self {
        let d = u_s.dim();
        let ud = u_s.adjoint();
        let mut g = ComplexMatrix::zeros(d * d, d * d);
        for k in channel.kraus() {
            let a = &ud * k;
            // m[(p, q)] = A[(q, p)] so that Σ ρ_pq m_pq = Tr(ρA)
            let m: Vec<C64> = (0..d * d).map(|idx| a[(idx % d, idx / d)]).collect();
            for x in 0..d * d {
                if m[x] == C64::new(0.0, 0.0) {
                    continue;
                }
                for y in 0..d * d {
                    g[(x, y)] += m[x] * m[y].conj();
                }
            }
        }
        Self { g }
    }

    fn fe_squared(&self, rho: &ComplexMatrix) -> f64 {
        let v = rho.as_slice();
        let n = v.len();
        let mut acc = C64::new(0.0, 0.0);
        for x in 0..n {
            let row = self.g.row(x);
            let mut s = C64::new(0.0, 0.0);
            for y in 0..n {
                s += row[y] * v[y].conj();
            }
            acc += v[x] * s;
        }
        acc.re.clamp(0.0, 1.0)
    }

    /// Entanglement-Bures length `arccos F_e`.
    fn length(&self, rho: &ComplexMatrix) -> f64 {
        let fe2 = self.fe_squared(rho);
        let fe = fe2.sqrt();
        // arccos F = 2 asin √((1 − F)/2), stable near F = 1
        let one_minus = (1.0 - fe2) / (1.0 + fe);
        2.0 * (one_minus / 2.0).sqrt().min(1.0).asin()
    }
}

/// Square root factor `A` with `ρ = AA^dag / Tr(AA^dag)`; refinement moves its entries.
fn from_factor(a: &ComplexMatrix) -> ComplexMatrix {
    let w = a * &a.adjoint();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr).hermitian_part()
}

/// `δ_Ue = max_ρ arccos F_e(ρ)`.
///
/// `F_e` can be minimized in the interior of the state space, so mixed
/// candidates are required: the stream is the maximally mixed state, then
/// alternating Haar pure and Hilbert–Schmidt random mixed states.
pub fn delta_ue(channel: &QuantumChannel, u_s: &ComplexMatrix, budget: &SamplerBudget) -> Result<DeltaUeEstimate> {
    check_target(channel, u_s)?;
    if budget.samples == 0 {
        return Err(Error::BudgetZero);
    }
    let d = u_s.dim();
    let obj = EntanglementObjective::new(channel, u_s);
    // distinct from the δ_U streams
    let root = SeedStream::new(budget.seed).child(u64::MAX);
    let total = 1 + budget.samples;
    let factor = |idx: usize| -> ComplexMatrix {
        if idx == 0 {
            return ComplexMatrix::identity(d);
        }
        let mut rng = root.child(idx as u64).rng();
        if idx % 2 == 1 {
            let psi = random_pure_state(&mut rng, d);
            ComplexMatrix::from_fn(d, d, |i, j| if j == 0 { psi.amplitudes()[i] } else { C64::new(0.0, 0.0) })
        } else {
            ComplexMatrix::from_fn(d, d, |_, _| complex_gaussian(&mut rng))
        }
    };
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|i| obj.length(&from_factor(&factor(i))))
        .collect();

    let mut best = f64::NEG_INFINITY;
    let mut best_factor = ComplexMatrix::identity(d);
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            let (f, r) = refine_mixed(&obj, factor(i), v, budget);
            best = r;
            best_factor = f;
        }
    }
    Ok(DeltaUeEstimate {
        value: best.max(0.0),
        argmax_state: DensityMatrix::from_matrix_unchecked(from_factor(&best_factor)),
        samples_used: total,
    })
}

fn refine_mixed(obj: &EntanglementObjective, mut a: ComplexMatrix, mut value: f64, budget: &SamplerBudget) -> (ComplexMatrix, f64) {
    let d = a.rows();
    let norm = a.frobenius_norm();
    a = a.scale_real(1.0 / norm);
    for step in budget.steps() {
        for idx in 0..2 * d * d {
            let (i, j) = ((idx / 2) / d, (idx / 2) % d);
            let unit = if idx % 2 == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
            for s in [step, -step] {
                let mut moved = false;
                for _ in 0..8 {
                    let mut trial = a.clone();
                    trial[(i, j)] += unit * s;
                    let n = trial.frobenius_norm();
                    if n < 1e-12 {
                        break;
                    }
                    let trial = trial.scale_real(1.0 / n);
                    let v = obj.length(&from_factor(&trial));
                    if v > value {
                        a = trial;
                        value = v;
                        moved = true;
                    } else {
                        break;
                    }
                }
                if moved {
                    break;
                }
            }
        }
    }
    (a, value)
}

/// `F_e` at a given state, exposed for checks against other constructions.
pub fn entanglement_fidelity(channel: &QuantumChannel, u_s: &ComplexMatrix, rho: &DensityMatrix) -> Result<f64> {
    check_target(channel, u_s)?;
    if rho.dim() != u_s.dim() {
        return Err(Error::dims("state and target differ in dimension"));
    }
    Ok(EntanglementObjective::new(channel, u_s).fe_squared(rho.matrix()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{mat_exp_herm, Sign};
    use crate::quantum::fidelity;

    fn small() -> SamplerBudget {
        SamplerBudget::default().with_samples(500)
    }

    #[test]
    fn perfect_implementation_has_zero_error() {
        let u = mat_exp_herm(&ComplexMatrix::from_real_diagonal(&[0.3, -1.0, 2.0]), 1.0, Sign::Minus).unwrap();
        let ch = QuantumChannel::unitary(u.clone());
        assert!(delta_u(&ch, &u, &small()).unwrap().value < 1e-7);
        assert!(delta_ue(&ch, &u, &small()).unwrap().value < 1e-7);
    }

    #[test]
    fn zero_budget_is_an_error() {
        let ch = QuantumChannel::identity(2);
        let u = ComplexMatrix::identity(2);
        let b = SamplerBudget::default().with_samples(0);
        assert!(matches!(delta_u(&ch, &u, &b), Err(Error::BudgetZero)));
    }

    #[test]
    fn z_rotation_against_identity() {
        let ch = QuantumChannel::unitary(
            mat_exp_herm(&ComplexMatrix::from_real_diagonal(&[1.0, -1.0]), std::f64::consts::FRAC_PI_4, Sign::Minus)
                .unwrap(),
        );
        let est = delta_u(&ch, &ComplexMatrix::identity(2), &small()).unwrap();
        // rotation by π/2 about z: equatorial states lose fidelity cos(π/4)
        let want = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        assert!((est.infidelity - want).abs() < 1e-7, "{}", est.infidelity);
        let rho = est.argmax_state.density();
        let f = fidelity(&ch.apply(&rho).unwrap(), &rho).unwrap();
        assert!((est.value.powi(4) + f - 1.0).abs() < 1e-8);
    }

    #[test]
    fn estimate_is_monotone_in_budget() {
        let h = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i + j) as f64 * 0.3, if i < j { 0.2 } else if i > j { -0.2 } else { 0.0 }));
        let ch = QuantumChannel::unitary(mat_exp_herm(&h, 1.0, Sign::Minus).unwrap());
        let u = ComplexMatrix::identity(3);
        let mut last = 0.0;
        for n in [10, 40, 160] {
            let v = delta_u(&ch, &u, &SamplerBudget::default().with_samples(n)).unwrap().value;
            assert!(v >= last);
            last = v;
        }
    }
}
