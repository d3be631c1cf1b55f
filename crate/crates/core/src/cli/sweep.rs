//! The Jaynes–Cummings spin-flip sweep over the coherent amplitude.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::report::format_real;
use crate::error::{Error, Result};
use crate::harness::{check_tradeoff1, CheckResult, LOWER_BOUND_NOTE};
use crate::metrics::{Evaluation, SamplerBudget};
use crate::models::{jc_model, JcParams};

pub const CSV_HEADER: [&str; 9] = [
    "alpha", "lambda", "fock_dim", "delta_u", "delta_e", "product", "bound", "in_regime", "seed",
];

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub steps: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub budget: SamplerBudget,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            alpha_min: 2.0,
            alpha_max: 20.0,
            steps: 10,
            epsilon: 10.0,
            tau: 1.0,
            budget: SamplerBudget::default(),
        }
    }
}

impl SweepConfig {
    /// Evenly spaced amplitudes, both ends included.
    pub fn alphas(&self) -> Vec<f64> {
        match self.steps {
            0 => vec![],
            1 => vec![self.alpha_min],
            n => (0..n)
                .map(|i| self.alpha_min + (self.alpha_max - self.alpha_min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub lambda: f64,
    pub fock_dim: usize,
    pub delta_u: f64,
    pub delta_e: f64,
    pub product: f64,
    /// `‖[H_S, U_S]‖ / 40`.
    pub bound: f64,
    /// Whether `δ_U` is small enough for the trade-off to be guaranteed.
    pub in_regime: bool,
    pub seed: u64,
}

impl SweepRow {
    pub fn check(&self) -> CheckResult {
        CheckResult::new("sweep_product", self.product, self.bound, None, LOWER_BOUND_NOTE)
    }

    fn record(&self) -> [String; 9] {
        [
            format_real(self.alpha),
            format_real(self.lambda),
            self.fock_dim.to_string(),
            format_real(self.delta_u),
            format_real(self.delta_e),
            format_real(self.product),
            format_real(self.bound),
            self.in_regime.to_string(),
            self.seed.to_string(),
        ]
    }
}

pub fn sweep_point(cfg: &SweepConfig, alpha: f64) -> Result<SweepRow> {
    let params = JcParams::flip(cfg.epsilon, cfg.tau, alpha);
    let model = jc_model(&params)?;
    let ev = Evaluation::new(&model, cfg.budget)?;
    let m = &ev.metrics;
    let in_regime = check_tradeoff1(m).regime.is_some_and(|r| r.met);
    Ok(SweepRow {
        alpha,
        lambda: params.lambda,
        fock_dim: model.dim_e(),
        delta_u: m.delta_u,
        delta_e: m.delta_e,
        product: m.delta_u * m.delta_e,
        bound: m.comm_norm / 40.0,
        in_regime,
        seed: cfg.budget.seed,
    })
}

/// One row per amplitude. Every point uses the same seed, so neighbouring
/// rows share their candidate states.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.steps > 0 && !(cfg.alpha_min > 0.0 && cfg.alpha_max >= cfg.alpha_min) {
        return Err(Error::invalid(
            "0 < alpha_min <= alpha_max",
            format!("alpha_min = {}, alpha_max = {}", cfg.alpha_min, cfg.alpha_max),
        ));
    }
    cfg.alphas().into_par_iter().map(|a| sweep_point(cfg, a)).collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[SweepRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// A gnuplot script drawing the product against its bound, with `δ_U` in
/// an inset.
pub fn plot_script(csv_path: &Path) -> String {
    let name = csv_path.file_name().map_or_else(|| "sweep.csv".into(), |n| n.to_string_lossy());
    let stem = csv_path.file_stem().map_or_else(|| "sweep".into(), |n| n.to_string_lossy());
    format!(
        r#"set datafile separator ','
set terminal pngcairo size 900,600
set output '{stem}.png'
set multiplot
set xlabel 'alpha'
set ylabel 'delta_E * delta_U'
set key top left
plot '{name}' using 1:6 skip 1 with linespoints title 'delta_E delta_U', \
     '{name}' using 1:7 skip 1 with lines dashtype 2 title 'bound'
set origin 0.55,0.45
set size 0.4,0.4
unset key
set xlabel 'alpha'
set ylabel 'delta_U'
plot '{name}' using 1:4 skip 1 with linespoints
unset multiplot
"#
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_even_amplitudes() {
        let a = SweepConfig::default().alphas();
        assert_eq!(a.len(), 10);
        for (i, x) in a.iter().enumerate() {
            assert!((x - 2.0 * (i + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_sweep() {
        let cfg = SweepConfig {
            steps: 0,
            ..SweepConfig::default()
        };
        assert!(sweep(&cfg).unwrap().is_empty());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let cfg = SweepConfig {
            alpha_min: 2.0,
            alpha_max: 3.0,
            steps: 2,
            budget: SamplerBudget::default().with_samples(200),
            ..SweepConfig::default()
        };
        let rows = sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(lines.count(), 2);
        for r in &rows {
            assert_eq!(r.product, r.delta_u * r.delta_e);
            assert!((r.bound - 0.5).abs() < 1e-10);
        }
    }
}
