//! The JSON report written by `verify`.
//!
//! Reals are printed with 17 significant digits so that a report read back
//! reproduces the exact doubles. Non-finite values become `null`.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::harness::{Certification, CheckResult, Regime};
use crate::metrics::Metrics;

/// A real that serializes in round-trip exponent form.
#[derive(Clone, Copy, Debug)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(format_real(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// `{:.16e}`: one digit before the point and sixteen after.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
pub struct MetricsJson {
    pub delta_u: Real,
    pub delta_e: Real,
    pub delta_eq: Real,
    pub delta_ue: Real,
    pub chi: Real,
    pub comm_norm: Real,
    pub h_s_norm: Real,
    pub fock_dim: Option<usize>,
    pub truncation_tail: Real,
}

impl From<&Metrics> for MetricsJson {
    fn from(m: &Metrics) -> Self {
        Self {
            delta_u: Real(m.delta_u),
            delta_e: Real(m.delta_e),
            delta_eq: Real(m.delta_eq),
            delta_ue: Real(m.delta_ue),
            chi: Real(m.chi),
            comm_norm: Real(m.comm_norm),
            h_s_norm: Real(m.h_s_norm),
            fock_dim: m.fock_dim,
            truncation_tail: Real(m.truncation_tail),
        }
    }
}

#[derive(Serialize)]
pub struct RegimeJson {
    pub quantity: &'static str,
    pub value: Real,
    pub threshold: Real,
    pub inclusive: bool,
    pub met: bool,
}

#[derive(Serialize)]
pub struct CheckJson {
    pub name: &'static str,
    pub lhs: Real,
    pub rhs: Real,
    pub margin: Real,
    pub satisfied: bool,
    pub status: &'static str,
    pub regime: Option<RegimeJson>,
    pub estimator_note: &'static str,
}

impl From<&Regime> for RegimeJson {
    fn from(r: &Regime) -> Self {
        Self {
            quantity: r.quantity,
            value: Real(r.value),
            threshold: Real(r.threshold),
            inclusive: r.inclusive,
            met: r.met,
        }
    }
}

impl From<&CheckResult> for CheckJson {
    fn from(c: &CheckResult) -> Self {
        Self {
            name: c.name,
            lhs: Real(c.lhs),
            rhs: Real(c.rhs),
            margin: Real(c.margin),
            satisfied: c.satisfied,
            status: c.status.as_str(),
            regime: c.regime.as_ref().map(RegimeJson::from),
            estimator_note: c.estimator_note,
        }
    }
}

#[derive(Serialize)]
pub struct DiagnosticsJson {
    pub samples_used: usize,
    pub escalations: usize,
    pub argmax_refined: bool,
    pub energy_gap: Real,
    pub tilde_delta_e: Real,
    pub env_bures: Real,
    pub gain_max: Real,
    pub gain_min: Real,
    /// Worst input found for `δ_U`, as `[re, im]` amplitudes.
    pub argmax_state: Vec<[Real; 2]>,
}

#[derive(Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub samples: usize,
    pub threads: usize,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct ReportJson {
    pub metrics: MetricsJson,
    pub checks: Vec<CheckJson>,
    pub diagnostics: DiagnosticsJson,
    pub provenance: Provenance,
    /// Seconds since the Unix epoch; the only field that differs between
    /// identical runs.
    pub timestamp: u64,
}

impl ReportJson {
    pub fn new(cert: &Certification, seed: u64, samples: usize, threads: usize, timestamp: u64) -> Self {
        let ev = &cert.evaluation;
        let m = &ev.metrics;
        Self {
            metrics: m.into(),
            checks: cert.checks.iter().map(CheckJson::from).collect(),
            diagnostics: DiagnosticsJson {
                samples_used: m.samples_used,
                escalations: cert.escalations,
                argmax_refined: ev.delta_u_estimate.refined,
                energy_gap: Real(m.energy_gap),
                tilde_delta_e: Real(m.tilde_delta_e),
                env_bures: Real(m.env_bures),
                gain_max: Real(m.gain_max),
                gain_min: Real(m.gain_min),
                argmax_state: ev
                    .delta_u_estimate
                    .argmax_state
                    .amplitudes()
                    .iter()
                    .map(|z| [Real(z.re), Real(z.im)])
                    .collect(),
            },
            provenance: Provenance {
                seed,
                samples,
                threads,
                version: env!("CARGO_PKG_VERSION"),
            },
            timestamp,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
