//! Randomized certification suites.
//!
//! Every trial draws all of its randomness from a single `u64` trial seed,
//! derived from the run seed, the suite and the trial index. A failing trial
//! is reported with that seed and can be replayed on its own.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::certify::certify;
use super::check::{CheckResult, Status, EXACT_NOTE};
use super::generators::{
    random_conserving_model, random_nonconserving_model, random_state, random_unify_instance, UNIFY_DIMS,
};
use super::inequalities::{check_covariance_fact, check_lemma1, check_theorem_unify};
use crate::error::{Error, Result};
use crate::linalg::{mat_exp_herm, Sign};
use crate::metrics::{delta_eq, delta_eq_oracle, SamplerBudget};
use crate::quantum::random::{random_density_rank, random_hermitian, random_unitary, splitmix};
use crate::quantum::SeedStream;

/// Largest composite dimension of the random models.
pub const MAX_COMPOSITE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Lemma1,
    TheoremUnify,
    CovarianceFact,
    DeltaEqOracle,
    Lemma2,
    MiddleS1S2,
    Generalized,
    Tradeoff,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemma1,
        Suite::TheoremUnify,
        Suite::CovarianceFact,
        Suite::DeltaEqOracle,
        Suite::Lemma2,
        Suite::MiddleS1S2,
        Suite::Generalized,
        Suite::Tradeoff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::TheoremUnify => "theorem_unify",
            Suite::CovarianceFact => "covariance_fact",
            Suite::DeltaEqOracle => "delta_eq_oracle",
            Suite::Lemma2 => "lemma2",
            Suite::MiddleS1S2 => "middle_s1s2",
            Suite::Generalized => "generalized",
            Suite::Tradeoff => "tradeoff",
        }
    }

    /// Trials actually run for a requested count. Suites that evaluate a full
    /// model, or run the decomposition oracle, cost far more per trial and
    /// run a tenth (a fifth for the oracle) as many.
    pub fn scaled_trials(self, requested: usize) -> usize {
        match self {
            Suite::Lemma1 | Suite::TheoremUnify | Suite::CovarianceFact => requested,
            Suite::DeltaEqOracle => requested.div_ceil(5),
            _ => requested.div_ceil(10),
        }
    }

    fn index(self) -> u64 {
        Suite::ALL.iter().position(|s| *s == self).expect("listed") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub trials: usize,
    /// Largest single-system dimension.
    pub dim_max: usize,
    pub seed: u64,
    /// Budget for model-based suites.
    pub budget: SamplerBudget,
    /// Flip every inequality, to prove the harness can fail.
    pub inject_bug: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            trials: 1000,
            dim_max: 8,
            seed: 42,
            budget: SamplerBudget::default().with_samples(2000),
            inject_bug: false,
        }
    }
}

pub fn trial_seed(seed: u64, suite: Suite, trial: usize) -> u64 {
    splitmix(seed ^ splitmix(suite.index().wrapping_mul(0x9e37_79b9) ^ splitmix(trial as u64)))
}

#[derive(Clone, Debug)]
pub struct TrialFailure {
    pub trial_seed: u64,
    pub check: Option<CheckResult>,
    pub error: Option<String>,
}

impl fmt::Display for TrialFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trial seed {}: ", self.trial_seed)?;
        match (&self.check, &self.error) {
            (Some(c), _) => write!(f, "{} lhs={:e} rhs={:e} ({})", c.name, c.lhs, c.rhs, c.status),
            (None, Some(e)) => write!(f, "error: {e}"),
            (None, None) => write!(f, "failed"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub passed: usize,
    /// Checks whose hypothesis did not hold.
    pub not_applicable: usize,
    /// Checks that were applicable and satisfied.
    pub certified: usize,
    /// Smallest `lhs − rhs` among applicable checks.
    pub min_margin: f64,
    pub failures: Vec<TrialFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs one trial from its seed and returns every check it produced.
pub fn run_trial(suite: Suite, trial_seed: u64, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let mut rng = SeedStream::new(trial_seed).rng();
    let dim_max = opts.dim_max.max(2);
    let checks = match suite {
        Suite::Lemma1 => {
            let d = rng.random_range(2..=dim_max);
            let s1 = random_state(&mut rng, d);
            let s2 = random_state(&mut rng, d);
            let a = random_hermitian(&mut rng, d, 1.0);
            vec![check_lemma1(&s1, &s2, &a)?]
        }
        Suite::TheoremUnify => {
            let dims = UNIFY_DIMS[rng.random_range(0..UNIFY_DIMS.len())];
            vec![check_theorem_unify(&random_unify_instance(&mut rng, dims)?)?]
        }
        Suite::CovarianceFact => {
            let d = rng.random_range(2..=dim_max);
            let b = random_hermitian(&mut rng, d, 1.0);
            let a = (&b * &b).hermitian_part();
            let u = if rng.random_bool(0.5) {
                random_unitary(&mut rng, d)
            } else {
                let g = super::generators::log_uniform(&mut rng, 1e-4, 1.0);
                mat_exp_herm(&random_hermitian(&mut rng, d, 1.0), g, Sign::Minus)?
            };
            let rho = random_state(&mut rng, d);
            vec![check_covariance_fact(&a, &u, &rho)?]
        }
        Suite::DeltaEqOracle => {
            let d = rng.random_range(2..=dim_max.min(4));
            let rank = rng.random_range(1..=d.min(3));
            let sigma = random_density_rank(&mut rng, d, rank);
            let h = random_hermitian(&mut rng, d, 1.0);
            let closed = delta_eq(&sigma, &h)?;
            let oracle = delta_eq_oracle(&sigma, &h, rank + 2, rng.random())?;
            vec![
                CheckResult::new("delta_eq_oracle_upper", oracle + 1e-6, closed, None, EXACT_NOTE),
                CheckResult::new(
                    "delta_eq_oracle_agreement",
                    1e-4 * closed + 1e-9,
                    (oracle - closed).abs(),
                    None,
                    EXACT_NOTE,
                ),
            ]
        }
        Suite::Lemma2 | Suite::Generalized | Suite::MiddleS1S2 | Suite::Tradeoff => {
            let conserving = match suite {
                Suite::MiddleS1S2 | Suite::Tradeoff => true,
                _ => rng.random_bool(0.5),
            };
            let model = if conserving {
                random_conserving_model(&mut rng, MAX_COMPOSITE)?
            } else {
                random_nonconserving_model(&mut rng, MAX_COMPOSITE)?
            };
            let budget = opts.budget.with_seed(rng.random());
            let wanted: &[&str] = match suite {
                Suite::Lemma2 => &["lemma2"],
                Suite::Generalized => &["generalized_delta_e", "generalized_delta_eq"],
                Suite::MiddleS1S2 => &["middle", "s1", "s2"],
                _ => &["tradeoff1", "tradeoff2", "entanglement_variant"],
            };
            certify(&model, budget)?
                .checks
                .into_iter()
                .filter(|c| wanted.contains(&c.name))
                .collect()
        }
    };
    Ok(if opts.inject_bug {
        checks.iter().map(CheckResult::negated).collect()
    } else {
        checks
    })
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> SuiteReport {
    let n = suite.scaled_trials(opts.trials);
    let outcomes: Vec<(u64, Result<Vec<CheckResult>>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(opts.seed, suite, i);
            (s, run_trial(suite, s, opts))
        })
        .collect();
    let mut report = SuiteReport {
        suite,
        trials: n,
        passed: 0,
        not_applicable: 0,
        certified: 0,
        min_margin: f64::INFINITY,
        failures: Vec::new(),
    };
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(checks) => {
                let mut ok = true;
                for c in checks {
                    match c.status {
                        Status::NotApplicable | Status::Vacuous => report.not_applicable += 1,
                        Status::Satisfied | Status::ExtendedRegime => {
                            if c.status == Status::Satisfied {
                                report.certified += 1;
                            }
                            report.min_margin = report.min_margin.min(c.margin);
                        }
                        Status::Violated => {
                            ok = false;
                            report.min_margin = report.min_margin.min(c.margin);
                            report.failures.push(TrialFailure {
                                trial_seed: seed,
                                check: Some(c),
                                error: None,
                            });
                        }
                    }
                }
                if ok {
                    report.passed += 1;
                }
            }
            Err(e) => report.failures.push(TrialFailure {
                trial_seed: seed,
                check: None,
                error: Some(e.to_string()),
            }),
        }
    }
    report
}
