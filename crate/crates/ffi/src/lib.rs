//! C interface to the uimpl toolkit.
//!
//! Models and reports are opaque heap handles created and released by this
//! library. Every fallible call returns a [`UimplStatus`]; on failure the
//! message is available from [`uimpl_last_error_message`] on the same
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::{SystemTime, UNIX_EPOCH};

use uimpl::cli::report::ReportJson;
use uimpl::cli::sweep::{sweep, SweepConfig};
use uimpl::error::Error;
use uimpl::harness::{certify, Certification, Status};
use uimpl::metrics::SamplerBudget;
use uimpl::models::{jc_model, load_model, FockDim, JcParams, Model, ModelSpec};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UimplStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    Numerical = 5,
    Io = 6,
    Panic = 7,
}

/// Verdict of one inequality check.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UimplCheckStatus {
    Satisfied = 0,
    Violated = 1,
    NotApplicable = 2,
    ExtendedRegime = 3,
    Vacuous = 4,
}

/// A system together with its implementation set and target gate.
pub struct UimplModel(Model);

/// Metrics and checks of an evaluated model.
pub struct UimplReport {
    cert: Certification,
    seed: u64,
    samples: usize,
    names: Vec<CString>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct UimplMetrics {
    pub delta_u: f64,
    pub delta_e: f64,
    pub delta_eq: f64,
    pub delta_ue: f64,
    pub chi: f64,
    pub comm_norm: f64,
    pub h_s_norm: f64,
    /// Fock truncation, or 0 for models without one.
    pub fock_dim: u64,
    pub truncation_tail: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct UimplCheck {
    /// Borrowed from the report; valid until it is freed.
    pub name: *const c_char,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
    pub status: UimplCheckStatus,
    /// 1 in regime, 0 outside it, -1 when the check has no regime condition.
    pub in_regime: i32,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct UimplSweepRow {
    pub alpha: f64,
    pub lambda: f64,
    pub fock_dim: u64,
    pub delta_u: f64,
    pub delta_e: f64,
    pub product: f64,
    pub bound: f64,
    pub in_regime: bool,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: UimplStatus, msg: impl Into<String>) -> UimplStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> UimplStatus {
    match e {
        Error::Parse(_) => UimplStatus::Parse,
        Error::Validation { .. } | Error::NonHermitian { .. } | Error::NotPsd { .. } | Error::DimMismatch(_) => {
            UimplStatus::Validation
        }
        Error::TailMassTooLarge { .. } | Error::BudgetZero | Error::NonFinite => UimplStatus::InvalidArgument,
        Error::NoConvergence(_) | Error::ScaleTooLarge(_) => UimplStatus::Numerical,
        Error::Io(_) => UimplStatus::Io,
    }
}

/// Runs `f`, records any error and turns a panic into [`UimplStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), UimplStatus>) -> UimplStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UimplStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(UimplStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn lift<T>(r: uimpl::error::Result<T>) -> Result<T, UimplStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, UimplStatus> {
    if p.is_null() {
        return Err(fail(UimplStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(UimplStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, UimplStatus> {
    p.as_ref()
        .ok_or_else(|| fail(UimplStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, UimplStatus> {
    p.as_mut()
        .ok_or_else(|| fail(UimplStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put_model(out: *mut *mut UimplModel, m: uimpl::error::Result<Model>) -> Result<(), UimplStatus> {
    let slot = out_arg(out, "out")?;
    *slot = ptr::null_mut();
    *slot = Box::into_raw(Box::new(UimplModel(lift(m)?)));
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn uimpl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call into the library from this thread.
#[no_mangle]
pub extern "C" fn uimpl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a model from the JSON model-spec format.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uimpl_model_from_json(json: *const c_char, out: *mut *mut UimplModel) -> UimplStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        put_model(out, ModelSpec::from_json(text).and_then(|s| s.build()))
    })
}

/// Reads a model-spec file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uimpl_model_load(path: *const c_char, out: *mut *mut UimplModel) -> UimplStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        put_model(out, load_model(path))
    })
}

/// The Jaynes–Cummings model. `fock_dim` 0 picks the truncation
/// automatically.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn uimpl_model_jaynes_cummings(
    epsilon: f64,
    lambda: f64,
    alpha: f64,
    tau: f64,
    fock_dim: u64,
    out: *mut *mut UimplModel,
) -> UimplStatus {
    guard(|| {
        let params = JcParams {
            epsilon,
            lambda,
            alpha,
            tau,
            fock_dim: match fock_dim {
                0 => FockDim::Auto,
                n => FockDim::Fixed(n as usize),
            },
            allow_large_tail: false,
        };
        put_model(out, jc_model(&params))
    })
}

/// # Safety
/// `model` must come from this library and not be used afterwards. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn uimpl_model_free(model: *mut UimplModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uimpl_model_dims(model: *const UimplModel, dim_s: *mut u64, dim_e: *mut u64) -> UimplStatus {
    guard(|| {
        let m = &ref_arg(model, "model")?.0;
        *out_arg(dim_s, "dim_s")? = m.dim_s() as u64;
        *out_arg(dim_e, "dim_e")? = m.dim_e() as u64;
        Ok(())
    })
}

/// Computes every metric and check, with the same budget escalation as the
/// command line.
///
/// # Safety
/// `model` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn uimpl_model_evaluate(
    model: *const UimplModel,
    samples: u64,
    seed: u64,
    out: *mut *mut UimplReport,
) -> UimplStatus {
    guard(|| {
        let m = &ref_arg(model, "model")?.0;
        let slot = out_arg(out, "out")?;
        *slot = ptr::null_mut();
        let samples = samples as usize;
        let cert = lift(certify(m, SamplerBudget::default().with_samples(samples).with_seed(seed)))?;
        let names = cert
            .checks
            .iter()
            .map(|c| CString::new(c.name).expect("check names have no nul"))
            .collect();
        *slot = Box::into_raw(Box::new(UimplReport {
            cert,
            seed,
            samples,
            names,
        }));
        Ok(())
    })
}

/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uimpl_report_metrics(report: *const UimplReport, out: *mut UimplMetrics) -> UimplStatus {
    guard(|| {
        let m = &ref_arg(report, "report")?.cert.evaluation.metrics;
        *out_arg(out, "out")? = UimplMetrics {
            delta_u: m.delta_u,
            delta_e: m.delta_e,
            delta_eq: m.delta_eq,
            delta_ue: m.delta_ue,
            chi: m.chi,
            comm_norm: m.comm_norm,
            h_s_norm: m.h_s_norm,
            fock_dim: m.fock_dim.unwrap_or(0) as u64,
            truncation_tail: m.truncation_tail,
        };
        Ok(())
    })
}

/// Whether no applicable check was violated.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uimpl_report_passed(report: *const UimplReport, out: *mut bool) -> UimplStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(report, "report")?.cert.passed();
        Ok(())
    })
}

/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uimpl_report_check_count(report: *const UimplReport, out: *mut usize) -> UimplStatus {
    guard(|| {
        *out_arg(out, "out")? = ref_arg(report, "report")?.cert.checks.len();
        Ok(())
    })
}

/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uimpl_report_check(report: *const UimplReport, index: usize, out: *mut UimplCheck) -> UimplStatus {
    guard(|| {
        let r = ref_arg(report, "report")?;
        let slot = out_arg(out, "out")?;
        let Some(c) = r.cert.checks.get(index) else {
            return Err(fail(
                UimplStatus::InvalidArgument,
                format!("check index {index} out of range ({} checks)", r.cert.checks.len()),
            ));
        };
        *slot = UimplCheck {
            name: r.names[index].as_ptr(),
            lhs: c.lhs,
            rhs: c.rhs,
            margin: c.margin,
            satisfied: c.satisfied,
            status: match c.status {
                Status::Satisfied => UimplCheckStatus::Satisfied,
                Status::Violated => UimplCheckStatus::Violated,
                Status::NotApplicable => UimplCheckStatus::NotApplicable,
                Status::ExtendedRegime => UimplCheckStatus::ExtendedRegime,
                Status::Vacuous => UimplCheckStatus::Vacuous,
            },
            in_regime: c.regime.as_ref().map_or(-1, |g| g.met as i32),
        };
        Ok(())
    })
}

/// The JSON report, as written by `uimpl verify`. Release it with
/// [`uimpl_string_free`].
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn uimpl_report_to_json(report: *const UimplReport, out: *mut *mut c_char) -> UimplStatus {
    guard(|| {
        let r = ref_arg(report, "report")?;
        let slot = out_arg(out, "out")?;
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let json = ReportJson::new(&r.cert, r.seed, r.samples, rayon::current_num_threads(), timestamp).to_json();
        *slot = CString::new(json).expect("JSON has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `report` must come from this library and not be used afterwards. NULL
/// is ignored.
#[no_mangle]
pub unsafe extern "C" fn uimpl_report_free(report: *mut UimplReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn uimpl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The Jaynes–Cummings spin-flip sweep with `ε = 10`, `τ = 1` and
/// `λ = π/(2α)`. Fills up to `capacity` rows and stores the row count in
/// `written`. If the buffer is too small nothing is computed, `written`
/// receives the required size and the call fails with
/// `UIMPL_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// `rows` must point to `capacity` writable rows (it may be NULL when
/// `capacity` is 0) and `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn uimpl_sweep(
    alpha_min: f64,
    alpha_max: f64,
    steps: usize,
    samples: u64,
    seed: u64,
    rows: *mut UimplSweepRow,
    capacity: usize,
    written: *mut usize,
) -> UimplStatus {
    guard(|| {
        let written = out_arg(written, "written")?;
        *written = 0;
        if capacity < steps {
            *written = steps;
            return Err(fail(
                UimplStatus::InvalidArgument,
                format!("row buffer holds {capacity}, {steps} needed"),
            ));
        }
        if steps > 0 && rows.is_null() {
            return Err(fail(UimplStatus::NullPointer, "rows is null"));
        }
        let cfg = SweepConfig {
            alpha_min,
            alpha_max,
            steps,
            budget: SamplerBudget::default().with_samples(samples as usize).with_seed(seed),
            ..SweepConfig::default()
        };
        let result = lift(sweep(&cfg))?;
        for (i, r) in result.iter().enumerate() {
            rows.add(i).write(UimplSweepRow {
                alpha: r.alpha,
                lambda: r.lambda,
                fock_dim: r.fock_dim as u64,
                delta_u: r.delta_u,
                delta_e: r.delta_e,
                product: r.product,
                bound: r.bound,
                in_regime: r.in_regime,
                seed: r.seed,
            });
        }
        *written = result.len();
        Ok(())
    })
}
