use std::fmt;

use crate::tol;

/// Verdict of one inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Satisfied,
    Violated,
    /// The inequality's hypothesis does not hold; the comparison is still
    /// recorded but cannot fail.
    NotApplicable,
    /// `1/8 < δ_U ≤ 1/4`: outside the proven regime but inside the looser
    /// one that is sometimes quoted. A violation here is reported, not failed.
    ExtendedRegime,
    /// The bound is trivially true (`χ ≥ ‖[H_S, U_S]‖`).
    Vacuous,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Satisfied => "satisfied",
            Status::Violated => "violated",
            Status::NotApplicable => "not-applicable",
            Status::ExtendedRegime => "extended-regime",
            Status::Vacuous => "vacuous",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Hypothesis of an inequality, `value < threshold` (or `≤` when `inclusive`).
#[derive(Clone, Debug, PartialEq)]
pub struct Regime {
    pub quantity: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub inclusive: bool,
    pub met: bool,
}

impl Regime {
    pub fn below(quantity: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            quantity,
            value,
            threshold,
            inclusive: false,
            met: value < threshold,
        }
    }

    pub fn at_most(quantity: &'static str, value: f64, threshold: f64) -> Self {
        Self {
            quantity,
            value,
            threshold,
            inclusive: true,
            met: value <= threshold,
        }
    }
}

/// One inequality, always normalized to `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`.
    pub margin: f64,
    pub satisfied: bool,
    pub status: Status,
    pub regime: Option<Regime>,
    pub estimator_note: &'static str,
}

/// `δ_U` and `δ_Ue` are maxima estimated by search, hence lower bounds.
pub const LOWER_BOUND_NOTE: &str = "uses a sampled lower bound on the worst-case error";
pub const EXACT_NOTE: &str = "exact evaluation";

impl CheckResult {
    /// `lhs ≥ rhs` with slack [`tol::CHECK_SLACK`]` · max(1, |rhs|)`.
    pub fn new(name: &'static str, lhs: f64, rhs: f64, regime: Option<Regime>, estimator_note: &'static str) -> Self {
        let satisfied = lhs >= rhs - tol::CHECK_SLACK * rhs.abs().max(1.0);
        let status = match (&regime, satisfied) {
            (Some(r), _) if !r.met => Status::NotApplicable,
            (_, true) => Status::Satisfied,
            (_, false) => Status::Violated,
        };
        Self {
            name,
            lhs,
            rhs,
            margin: lhs - rhs,
            satisfied,
            status,
            regime,
            estimator_note,
        }
    }

    pub(crate) fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    /// An in-regime violation.
    pub fn is_failure(&self) -> bool {
        self.status == Status::Violated
    }

    pub fn uses_lower_bound(&self) -> bool {
        self.estimator_note == LOWER_BOUND_NOTE
    }

    /// The opposite inequality; only for exercising the failure path.
    pub fn negated(&self) -> Self {
        Self::new(self.name, self.rhs, self.lhs, self.regime.clone(), self.estimator_note)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_scales_with_rhs() {
        assert!(CheckResult::new("t", 1.0 - 1e-13, 1.0, None, EXACT_NOTE).satisfied);
        assert!(!CheckResult::new("t", 1.0 - 1e-11, 1.0, None, EXACT_NOTE).satisfied);
        assert!(CheckResult::new("t", 1e6 - 1e-7, 1e6, None, EXACT_NOTE).satisfied);
    }

    #[test]
    fn out_of_regime_never_fails() {
        let r = CheckResult::new("t", 0.0, 1.0, Some(Regime::below("delta_u", 0.5, 0.1)), EXACT_NOTE);
        assert!(!r.satisfied);
        assert_eq!(r.status, Status::NotApplicable);
        assert!(!r.is_failure());
    }
}
