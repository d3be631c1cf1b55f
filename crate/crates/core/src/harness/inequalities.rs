//! The trade-off inequalities and the lemmas behind them.

use std::f64::consts::SQRT_2;

use super::check::{CheckResult, Regime, Status, EXACT_NOTE, LOWER_BOUND_NOTE};
use crate::error::{Error, Result};
use crate::linalg::{inner, kron_vec, spectral_norm, ComplexMatrix, C64};
use crate::metrics::Metrics;
use crate::quantum::{bures_distance, fidelity_factored, DensityMatrix, FactoredState, PureState};
use crate::tol;

/// `‖[H_S, U_S]‖` this small counts as zero.
fn vanishes(c: f64, m: &Metrics) -> bool {
    c <= 1e-12 * m.h_s_norm.max(1.0)
}

fn conserving(m: &Metrics) -> bool {
    m.chi <= tol::CONSERVATION_GATE * m.comm_norm
}

/// `δ_E δ_U ≥ ‖[H_S, U_S]‖ / 40` for `δ_U < ‖[H_S, U_S]‖ / (40‖H_S‖)`,
/// for energy-conserving implementations.
pub fn check_tradeoff1(m: &Metrics) -> CheckResult {
    tradeoff("tradeoff1", m.delta_e, m, 40.0, 40.0)
}

/// `δ_EQ δ_U ≥ ‖[H_S, U_S]‖ / 81` for `δ_U < ‖[H_S, U_S]‖ / (64‖H_S‖)`.
pub fn check_tradeoff2(m: &Metrics) -> CheckResult {
    tradeoff("tradeoff2", m.delta_eq, m, 81.0, 64.0)
}

fn tradeoff(name: &'static str, fluct: f64, m: &Metrics, bound: f64, regime: f64) -> CheckResult {
    let c = m.comm_norm;
    let lhs = fluct * m.delta_u;
    if vanishes(c, m) {
        return CheckResult::new(name, lhs, 0.0, None, LOWER_BOUND_NOTE);
    }
    let r = Regime::below("delta_u", m.delta_u, c / (regime * m.h_s_norm));
    let check = CheckResult::new(name, lhs, c / bound, Some(r), LOWER_BOUND_NOTE);
    if conserving(m) {
        check
    } else {
        // the generalized checks cover this case
        check.with_status(Status::NotApplicable)
    }
}

/// `δ_E δ_U ≥ (‖[H_S, U_S]‖ − χ)/40` and `δ_EQ δ_U ≥ (‖[H_S, U_S]‖ − χ)/81`
/// for `δ_U < (‖[H_S, U_S]‖ − χ) / (128 max(‖H_S‖, χ))`.
pub fn check_generalized(m: &Metrics) -> [CheckResult; 2] {
    let c = m.comm_norm - m.chi;
    let pair = [
        ("generalized_delta_e", m.delta_e, 40.0),
        ("generalized_delta_eq", m.delta_eq, 81.0),
    ];
    pair.map(|(name, fluct, bound)| {
        let lhs = fluct * m.delta_u;
        if c <= 0.0 {
            return CheckResult::new(name, lhs, c / bound, None, LOWER_BOUND_NOTE).with_status(Status::Vacuous);
        }
        let r = Regime::below("delta_u", m.delta_u, c / (128.0 * m.h_s_norm.max(m.chi)));
        CheckResult::new(name, lhs, c / bound, Some(r), LOWER_BOUND_NOTE)
    })
}

/// `√2 L_B(σ₁, σ₂)(δ_A(σ₁) + δ_A(σ₂) + Δ) ≥ Δ` with `Δ = |Tr[A(σ₁ − σ₂)]|`.
pub fn check_lemma1(sigma1: &DensityMatrix, sigma2: &DensityMatrix, a: &ComplexMatrix) -> Result<CheckResult> {
    let delta = (sigma1.expectation(a)? - sigma2.expectation(a)?).abs();
    let d1 = sigma1.variance(a)?.sqrt();
    let d2 = sigma2.variance(a)?.sqrt();
    let lb = bures_distance(sigma1, sigma2)?;
    Ok(CheckResult::new("lemma1", SQRT_2 * lb * (d1 + d2 + delta), delta, None, EXACT_NOTE))
}

/// Regime shared by the checks that rest on `L_B(σ'_1, σ'_2) ≤ 4δ_U`.
fn lemma2_regime(name: &'static str, lhs: f64, rhs: f64, delta_u: f64) -> CheckResult {
    let strict = Regime::at_most("delta_u", delta_u, 0.125);
    let check = CheckResult::new(name, lhs, rhs, Some(strict), LOWER_BOUND_NOTE);
    if check.status == Status::NotApplicable && delta_u <= 0.25 {
        check.with_status(Status::ExtendedRegime)
    } else {
        check
    }
}

/// `4δ_U ≥ L_B(σ'_max, σ'_min)` for the apparatus states left behind by the
/// extremal pair.
pub fn check_lemma2(m: &Metrics) -> CheckResult {
    lemma2_regime("lemma2", 4.0 * m.delta_u, m.env_bures, m.delta_u)
}

/// `Δ ≤ 4√2 δ_U (2δ̃_E + Δ)`, `‖[H_S, U_S]‖ ≤ Δ + 4√2 δ_U² ‖H_S‖` and
/// `δ̃_E ≤ δ_E + ‖H_S‖`. The last two use energy conservation.
pub fn check_middle_and_s1s2(m: &Metrics) -> [CheckResult; 3] {
    let d = m.energy_gap;
    let middle = lemma2_regime(
        "middle",
        4.0 * SQRT_2 * m.delta_u * (2.0 * m.tilde_delta_e + d),
        d,
        m.delta_u,
    );
    let mut s1 = CheckResult::new(
        "s1",
        d + 4.0 * SQRT_2 * m.delta_u * m.delta_u * m.h_s_norm,
        m.comm_norm,
        None,
        LOWER_BOUND_NOTE,
    );
    let mut s2 = CheckResult::new("s2", m.delta_e + m.h_s_norm, m.tilde_delta_e, None, EXACT_NOTE);
    if !conserving(m) && !vanishes(m.comm_norm, m) {
        s1 = s1.with_status(Status::NotApplicable);
        s2 = s2.with_status(Status::NotApplicable);
    }
    [middle, s1, s2]
}

/// `δ_Ue δ_E ≥ ‖[H_S, U_S]‖ / 8` for `δ_Ue ≤ ‖[H_S, U_S]‖ / (16‖H_S‖)`.
/// Stated without a published proof; tested empirically.
pub fn check_entanglement_variant(m: &Metrics) -> CheckResult {
    let c = m.comm_norm;
    let lhs = m.delta_ue * m.delta_e;
    if vanishes(c, m) {
        return CheckResult::new("entanglement_variant", lhs, 0.0, None, LOWER_BOUND_NOTE);
    }
    let r = Regime::at_most("delta_ue", m.delta_ue, c / (16.0 * m.h_s_norm));
    let check = CheckResult::new("entanglement_variant", lhs, c / 8.0, Some(r), LOWER_BOUND_NOTE);
    if conserving(m) {
        check
    } else {
        check.with_status(Status::NotApplicable)
    }
}

/// `χ(2δ_A(ρ) + χ) ≥ |δ_A(ρ)² − δ_{U^dag AU}(ρ)²|` with `χ = ‖[U, A]‖`.
pub fn check_covariance_fact(a: &ComplexMatrix, u: &ComplexMatrix, rho: &DensityMatrix) -> Result<CheckResult> {
    let chi = spectral_norm(&u.commutator(a))?;
    let rotated = (&(&u.adjoint() * a) * u).hermitian_part();
    let va = rho.variance(a)?;
    let vb = rho.variance(&rotated)?;
    Ok(CheckResult::new(
        "covariance_fact",
        chi * (2.0 * va.sqrt() + chi),
        (va - vb).abs(),
        None,
        EXACT_NOTE,
    ))
}

/// Inputs of the two-system inequality bounding how distinguishable the
/// apparatus becomes in terms of per-state implementation errors.
#[derive(Clone, Debug)]
pub struct UnifyInstance {
    pub dim_a: usize,
    pub dim_b: usize,
    pub v_ab: ComplexMatrix,
    pub u_a: ComplexMatrix,
    pub sigma_b: PureState,
    pub nu1: PureState,
    pub nu2: PureState,
}

/// `L_B(σ'_B,1, σ'_B,2) ≤ 2√(δ₁⁴ + δ₂⁴ + √2(δ₁² + δ₂²)) + 2√2 δ₁₂² + δ₁² + δ₂²`
/// where `δ_ν = L_B(ρ'_A,ν, U_A ρ_ν U_A^dag)^{1/2}` and `ν₁₂` is the equal
/// superposition of the two orthogonal inputs.
pub fn check_theorem_unify(inst: &UnifyInstance) -> Result<CheckResult> {
    let (da, db) = (inst.dim_a, inst.dim_b);
    if inst.v_ab.dim() != da * db || inst.u_a.dim() != da || inst.sigma_b.dim() != db {
        return Err(Error::dims("inconsistent instance dimensions"));
    }
    if inst.nu1.overlap(&inst.nu2).norm() > 1e-9 {
        return Err(Error::invalid("inputs are orthogonal", "⟨ν₁|ν₂⟩ ≠ 0"));
    }
    let sup: Vec<_> = inst
        .nu1
        .amplitudes()
        .iter()
        .zip(inst.nu2.amplitudes())
        .map(|(x, y)| (x + y) * std::f64::consts::FRAC_1_SQRT_2)
        .collect();
    let nu12 = PureState::normalized(sup)?;

    // Output w = V(|ν⟩ ⊗ |σ_B⟩) is pure; with W[a][b] = w[a·d_B + b] the
    // reduced states are ρ'_A = W W^dag and σ'_B = Wᵀ conj(W). The leaked
    // weight ‖(I − |t⟩⟨t|)W‖² is summed directly for precision.
    let run = |nu: &PureState| -> Result<(f64, FactoredState)> {
        let w = inst.v_ab.mul_vec(&kron_vec(nu.amplitudes(), inst.sigma_b.amplitudes()));
        let t = inst.u_a.mul_vec(nu.amplitudes());
        let mut kept = 0.0;
        let mut leaked = 0.0;
        for b in 0..db {
            let col: Vec<C64> = (0..da).map(|a| w[a * db + b]).collect();
            let c = inner(&t, &col);
            kept += c.norm_sqr();
            leaked += col.iter().zip(&t).map(|(x, y)| (x - c * y).norm_sqr()).sum::<f64>();
        }
        let infidelity = leaked / (1.0 + kept.clamp(0.0, 1.0).sqrt());
        let factor = ComplexMatrix::from_fn(db, da, |b, a| w[a * db + b]);
        Ok((infidelity.max(0.0).powf(0.25), FactoredState::new(factor)))
    };
    let (d1, s1) = run(&inst.nu1)?;
    let (d2, s2) = run(&inst.nu2)?;
    let (d12, _) = run(&nu12)?;
    let (q1, q2, q12) = (d1 * d1, d2 * d2, d12 * d12);
    let bound = 2.0 * (q1 * q1 + q2 * q2 + SQRT_2 * (q1 + q2)).sqrt() + 2.0 * SQRT_2 * q12 + q1 + q2;
    let f = fidelity_factored(&s1, &s2)?;
    Ok(CheckResult::new("theorem_unify", bound, (1.0 - f).max(0.0).sqrt(), None, EXACT_NOTE))
}

/// Every check that applies to a single model.
pub fn model_checks(m: &Metrics) -> Vec<CheckResult> {
    let mut out = vec![check_tradeoff1(m), check_tradeoff2(m)];
    out.extend(check_generalized(m));
    out.push(check_lemma2(m));
    out.extend(check_middle_and_s1s2(m));
    out.push(check_entanglement_variant(m));
    out
}
