//! The `uimpl` command line: `verify`, `sweep` and `props`.

pub mod report;
pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::harness::{certify, run_suite, run_trial, Suite, SuiteOptions};
use crate::metrics::SamplerBudget;
use crate::models::load_model;
use report::ReportJson;
use sweep::{plot_script, sweep, write_csv, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "uimpl", version, about = "Certify gate implementations through system-apparatus dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute every metric of a model and check the trade-off inequalities.
    Verify(VerifyArgs),
    /// Sweep the Jaynes–Cummings spin flip over the coherent amplitude.
    Sweep(SweepArgs),
    /// Run the randomized certification suites.
    Props(PropsArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Threads {
    /// Worker threads [default: available parallelism]
    #[arg(long, env = "UIMPL_THREADS")]
    pub threads: Option<usize>,
}

impl Threads {
    pub fn resolve(self) -> usize {
        self.threads
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Model file (JSON)
    #[arg(short, long)]
    pub model: PathBuf,
    /// Report path; stdout when absent
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub threads: Threads,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 2.0)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 20.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 10)]
    pub steps: usize,
    #[arg(long, default_value_t = 10.0)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// CSV path; a gnuplot script is written beside it with extension `.gp`
    #[arg(short, long, default_value = "sweep.csv")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[command(flatten)]
    pub threads: Threads,
}

#[derive(Args, Debug)]
pub struct PropsArgs {
    /// Requested trials; suites that evaluate whole models run fewer
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Largest single-system dimension
    #[arg(long, default_value_t = 8)]
    pub dim_max: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Sampling budget for model-based suites
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Run only this suite
    #[arg(long)]
    pub suite: Option<String>,
    /// Replay a single trial of `--suite`
    #[arg(long, requires = "suite")]
    pub trial_seed: Option<u64>,
    #[arg(long, hide = true)]
    pub inject_bug: bool,
    #[command(flatten)]
    pub threads: Threads,
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let threads = match &cli.command {
        Command::Verify(a) => a.threads,
        Command::Sweep(a) => a.threads,
        Command::Props(a) => a.threads,
    }
    .resolve();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {threads} worker threads: {e}");
            return EXIT_INPUT;
        }
    };
    let outcome = pool.install(|| match cli.command {
        Command::Verify(a) => cmd_verify(&a, threads),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Props(a) => cmd_props(&a),
    });
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        EXIT_INPUT
    })
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_verify(a: &VerifyArgs, threads: usize) -> Result<i32> {
    let model = load_model(&a.model)?;
    let budget = SamplerBudget::default().with_samples(a.samples).with_seed(a.seed);
    let cert = certify(&model, budget)?;
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let report = ReportJson::new(&cert, a.seed, a.samples, threads, timestamp);
    write_output(a.out.as_deref(), &report.to_json())?;
    for c in cert.failures() {
        eprintln!("violated: {} (lhs {:e} < rhs {:e})", c.name, c.lhs, c.rhs);
    }
    Ok(if cert.passed() { EXIT_OK } else { EXIT_VIOLATION })
}

pub fn cmd_sweep(a: &SweepArgs) -> Result<i32> {
    let cfg = SweepConfig {
        alpha_min: a.alpha_min,
        alpha_max: a.alpha_max,
        steps: a.steps,
        epsilon: a.epsilon,
        tau: a.tau,
        budget: SamplerBudget::default().with_samples(a.samples).with_seed(a.seed),
    };
    let rows = sweep(&cfg)?;
    write_csv(fs::File::create(&a.out)?, &rows)?;
    fs::write(a.out.with_extension("gp"), plot_script(&a.out))?;
    let mut code = EXIT_OK;
    for r in &rows {
        let c = r.check();
        println!(
            "alpha {:>8.4}  delta_u {:.6e}  product {:.6e}  bound {:.6e}  {}",
            r.alpha, r.delta_u, r.product, r.bound, c.status
        );
        if !c.satisfied {
            code = EXIT_VIOLATION;
        }
    }
    Ok(code)
}

pub fn cmd_props(a: &PropsArgs) -> Result<i32> {
    let opts = SuiteOptions {
        trials: a.trials,
        dim_max: a.dim_max,
        seed: a.seed,
        budget: SamplerBudget::default().with_samples(a.samples),
        inject_bug: a.inject_bug,
    };
    let suites = match &a.suite {
        Some(name) => vec![name.parse::<Suite>()?],
        None => Suite::ALL.to_vec(),
    };
    if let Some(seed) = a.trial_seed {
        let checks = run_trial(suites[0], seed, &opts)?;
        let mut code = EXIT_OK;
        for c in &checks {
            println!("{}: lhs {:.16e} rhs {:.16e} {}", c.name, c.lhs, c.rhs, c.status);
            if c.is_failure() {
                code = EXIT_VIOLATION;
            }
        }
        return Ok(code);
    }
    let mut code = EXIT_OK;
    for suite in suites {
        let r = run_suite(suite, &opts);
        println!(
            "{:<16} {:>5}/{:<5} passed  {:>5} certified  {:>5} not applicable  min margin {:.3e}",
            suite.name(),
            r.passed,
            r.trials,
            r.certified,
            r.not_applicable,
            r.min_margin
        );
        for f in &r.failures {
            println!("  FAIL {f}");
            println!(
                "  replay: uimpl props --suite {} --trial-seed {} --dim-max {} --samples {}",
                suite.name(),
                f.trial_seed,
                a.dim_max,
                a.samples
            );
        }
        if !r.ok() {
            code = EXIT_VIOLATION;
        }
    }
    Ok(code)
}
