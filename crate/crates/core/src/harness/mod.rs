//! Inequality verdicts and the randomized suites that certify them.

mod certify;
mod check;
pub mod generators;
mod inequalities;
pub mod suites;

pub use certify::{certify, Certification, MAX_ESCALATIONS};
pub use check::{CheckResult, Regime, Status, EXACT_NOTE, LOWER_BOUND_NOTE};
pub use inequalities::{
    check_covariance_fact, check_entanglement_variant, check_generalized, check_lemma1, check_lemma2,
    check_middle_and_s1s2, check_theorem_unify, check_tradeoff1, check_tradeoff2, model_checks, UnifyInstance,
};
pub use suites::{run_suite, run_trial, trial_seed, Suite, SuiteOptions, SuiteReport, TrialFailure};
