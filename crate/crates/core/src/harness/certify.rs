use super::check::CheckResult;
use super::inequalities::model_checks;
use crate::error::Result;
use crate::metrics::{Evaluation, SamplerBudget};
use crate::models::Model;

/// Budget escalations allowed before a violation is reported.
pub const MAX_ESCALATIONS: usize = 2;

/// A model's metrics with every applicable check.
#[derive(Clone, Debug)]
pub struct Certification {
    pub evaluation: Evaluation,
    pub checks: Vec<CheckResult>,
    /// How many times the sampling budget was quadrupled.
    pub escalations: usize,
}

impl Certification {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.is_failure())
    }

    pub fn passed(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Evaluates and checks a model. The worst-case errors are estimated from
/// below, so an apparent violation of a check that uses them may just be an
/// underestimate: the budget is quadrupled and the checks rerun, up to
/// [`MAX_ESCALATIONS`] times.
pub fn certify(model: &Model, budget: SamplerBudget) -> Result<Certification> {
    let mut evaluation = Evaluation::new(model, budget)?;
    let mut checks = model_checks(&evaluation.metrics);
    let mut escalations = 0;
    while escalations < MAX_ESCALATIONS && checks.iter().any(|c| c.is_failure() && c.uses_lower_bound()) {
        evaluation.escalate()?;
        escalations += 1;
        checks = model_checks(&evaluation.metrics);
    }
    Ok(Certification {
        evaluation,
        checks,
        escalations,
    })
}
