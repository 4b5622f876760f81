//! C ABI for the fdwfl toolkit.
//!
//! Handles are opaque pointers owned by the library; every constructor has
//! a matching `_free`. Functions return [`FdwflStatus`]; on failure the
//! thread-local message behind [`fdwfl_last_error_message`] explains why.
//! Complex vectors cross the boundary as interleaved `re, im` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64;

use fdwfl::bench::io::read_spectrum_csv;
use fdwfl::bench::{benchmark_model, multisine, run_experiment, ExperimentConfig};
use fdwfl::error::Error;
use fdwfl::frfeval::{estimate_noisy, evaluate_joint};
use fdwfl::lti::{experiment_to_spectrum, IoSpectrumData, StateSpaceModel};
use fdwfl::spectra::{check_pe, FrequencyGrid, Spectrum};
use fdwfl::wfl::membership_transient;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdwflStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    GridMismatch = 4,
    MissingStateSpectrum = 5,
    EvaluationAtEigenvalue = 6,
    IllConditioned = 7,
    PeShortfall = 8,
    RankDeficient = 9,
    Io = 10,
    Parse = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(message: String) {
    let sanitized = CString::new(message).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = sanitized);
}

fn status_of(err: &Error) -> FdwflStatus {
    match err {
        Error::ShapeMismatch(_) => FdwflStatus::ShapeMismatch,
        Error::InvalidArgument(_) => FdwflStatus::InvalidArgument,
        Error::GridMismatch(_, _) => FdwflStatus::GridMismatch,
        Error::MissingStateSpectrum => FdwflStatus::MissingStateSpectrum,
        Error::EvaluationAtEigenvalue { .. } => FdwflStatus::EvaluationAtEigenvalue,
        Error::IllConditioned { .. } => FdwflStatus::IllConditioned,
        Error::PeShortfall { .. } => FdwflStatus::PeShortfall,
        Error::RankDeficient { .. } => FdwflStatus::RankDeficient,
        Error::Io(_) => FdwflStatus::Io,
        Error::Json(_) | Error::Csv(_) => FdwflStatus::Parse,
    }
}

fn fail(err: Error) -> FdwflStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

/// Last error message for this thread; valid until the next failing call.
#[no_mangle]
pub extern "C" fn fdwfl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fdwfl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Opaque state-space model handle.
pub struct FdwflModel {
    inner: StateSpaceModel,
}

/// Opaque input/output spectrum data handle.
pub struct FdwflData {
    inner: IoSpectrumData,
}

macro_rules! nonnull {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => {
                set_error("null pointer".into());
                return FdwflStatus::NullPointer;
            }
        }
    };
}

/// Parse a model from its JSON form (`A`, `B`, `C`, `D` as nested arrays).
///
/// # Safety
/// `json` must be a NUL-terminated UTF-8 string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_model_from_json(
    json: *const c_char,
    out: *mut *mut FdwflModel,
) -> FdwflStatus {
    if json.is_null() || out.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_error("model JSON is not UTF-8".into());
            return FdwflStatus::InvalidArgument;
        }
    };
    match serde_json::from_str::<StateSpaceModel>(text) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(FdwflModel { inner: model }));
            FdwflStatus::Ok
        }
        Err(e) => fail(Error::Json(e)),
    }
}

/// The built-in fourth-order benchmark model.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_model_benchmark(out: *mut *mut FdwflModel) -> FdwflStatus {
    if out.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    *out = Box::into_raw(Box::new(FdwflModel {
        inner: benchmark_model(),
    }));
    FdwflStatus::Ok
}

/// # Safety
/// `model` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_model_free(model: *mut FdwflModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// State, input, and output dimensions of a model.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_model_dims(
    model: *const FdwflModel,
    n_x: *mut usize,
    n_u: *mut usize,
    n_y: *mut usize,
) -> FdwflStatus {
    let model = nonnull!(model);
    if n_x.is_null() || n_u.is_null() || n_y.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    *n_x = model.inner.n_x();
    *n_u = model.inner.n_u();
    *n_y = model.inner.n_y();
    FdwflStatus::Ok
}

/// Run a `2M`-sample experiment and capture its spectra.
///
/// `u` is row-major with `2 * m` rows of `n_u` entries; `x0` has `n_x`
/// entries. The state spectrum is retained inside the handle.
///
/// # Safety
/// Buffers must match the advertised lengths; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_experiment(
    model: *const FdwflModel,
    u: *const f64,
    m: usize,
    x0: *const f64,
    out: *mut *mut FdwflData,
) -> FdwflStatus {
    let model = nonnull!(model);
    if u.is_null() || x0.is_null() || out.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    let grid = match FrequencyGrid::new(m) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let n_u = model.inner.n_u();
    let samples = std::slice::from_raw_parts(u, 2 * m * n_u);
    let inputs: Vec<DVector<f64>> = (0..2 * m)
        .map(|t| DVector::from_fn(n_u, |r, _| samples[t * n_u + r]))
        .collect();
    let x0 = DVector::from_column_slice(std::slice::from_raw_parts(x0, model.inner.n_x()));
    match experiment_to_spectrum(&model.inner, &inputs, &x0, &grid) {
        Ok((data, _)) => {
            *out = Box::into_raw(Box::new(FdwflData { inner: data }));
            FdwflStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Run the default odd-bin multisine experiment with a seeded initial state
/// and optional output noise, like the CLI `simulate` subcommand.
///
/// # Safety
/// `out` must be valid. `snr <= 0` disables noise.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_experiment_multisine(
    model: *const FdwflModel,
    m: usize,
    periods: usize,
    snr: f64,
    seed: u64,
    out: *mut *mut FdwflData,
) -> FdwflStatus {
    let model = nonnull!(model);
    if out.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    let mut cfg = ExperimentConfig::noise_free_case_study(seed);
    cfg.m = m;
    cfg.periods = periods.max(1);
    cfg.snr = if snr > 0.0 { Some(snr) } else { None };
    match run_experiment(&model.inner, &cfg) {
        Ok((data, _)) => {
            *out = Box::into_raw(Box::new(FdwflData { inner: data }));
            FdwflStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Load data from the spectrum CSV pair written by the CLI.
///
/// # Safety
/// Paths must be NUL-terminated strings; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_data_from_csv(
    u_path: *const c_char,
    y_path: *const c_char,
    out: *mut *mut FdwflData,
) -> FdwflStatus {
    if u_path.is_null() || y_path.is_null() || out.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    let parse = |p: *const c_char| CStr::from_ptr(p).to_str().map(Path::new).map_err(|_| ());
    let (u_path, y_path) = match (parse(u_path), parse(y_path)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            set_error("path is not UTF-8".into());
            return FdwflStatus::InvalidArgument;
        }
    };
    let load = || -> fdwfl::Result<IoSpectrumData> {
        IoSpectrumData::new(read_spectrum_csv(u_path)?, read_spectrum_csv(y_path)?, None)
    };
    match load() {
        Ok(data) => {
            *out = Box::into_raw(Box::new(FdwflData { inner: data }));
            FdwflStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `data` must come from this library and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_data_free(data: *mut FdwflData) {
    if !data.is_null() {
        drop(Box::from_raw(data));
    }
}

/// Grid size and channel dimensions of a data handle.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_data_dims(
    data: *const FdwflData,
    m: *mut usize,
    n_u: *mut usize,
    n_y: *mut usize,
) -> FdwflStatus {
    let data = nonnull!(data);
    if m.is_null() || n_u.is_null() || n_y.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    *m = data.inner.grid().len();
    *n_u = data.inner.n_u();
    *n_y = data.inner.n_y();
    FdwflStatus::Ok
}

/// Persistence-of-excitation test of the input spectrum (optionally with
/// the phasor channel appended).
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_check_pe(
    data: *const FdwflData,
    order: usize,
    augmented: bool,
    tol_rel: f64,
    is_pe: *mut bool,
    rank: *mut usize,
) -> FdwflStatus {
    let data = nonnull!(data);
    if is_pe.is_null() || rank.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    if order == 0 {
        set_error("PE order must be at least 1".into());
        return FdwflStatus::InvalidArgument;
    }
    let spectrum: Spectrum = if augmented {
        data.inner.augmented_input()
    } else {
        data.inner.input().clone()
    };
    let report = check_pe(&spectrum, order, tol_rel);
    *is_pe = report.is_pe;
    *rank = report.rank;
    FdwflStatus::Ok
}

unsafe fn write_complex(dst: *mut f64, values: &DVector<Complex64>) {
    let out = std::slice::from_raw_parts_mut(dst, 2 * values.len());
    for (i, c) in values.iter().enumerate() {
        out[2 * i] = c.re;
        out[2 * i + 1] = c.im;
    }
}

/// Exact FRF/transient evaluation at `z` via the joint two-sided solve.
///
/// `uz` is interleaved `re, im` of length `2 * n_u`; `yz` and `tz` receive
/// `2 * n_y` doubles each. `condition` may be null.
///
/// # Safety
/// Buffers must match the dimensions reported by [`fdwfl_data_dims`].
#[no_mangle]
pub unsafe extern "C" fn fdwfl_evaluate(
    data: *const FdwflData,
    z_re: f64,
    z_im: f64,
    uz: *const f64,
    l0: usize,
    yz: *mut f64,
    tz: *mut f64,
    condition: *mut f64,
) -> FdwflStatus {
    let data = nonnull!(data);
    if uz.is_null() || yz.is_null() || tz.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    let n_u = data.inner.n_u();
    let uz_slice = std::slice::from_raw_parts(uz, 2 * n_u);
    let uz_vec = DVector::from_fn(n_u, |r, _| {
        Complex64::new(uz_slice[2 * r], uz_slice[2 * r + 1])
    });
    match evaluate_joint(&data.inner, Complex64::new(z_re, z_im), &uz_vec, l0) {
        Ok(result) => {
            write_complex(yz, &result.yz);
            write_complex(tz, &result.tz);
            if !condition.is_null() {
                *condition = result.condition;
            }
            FdwflStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Noise-robust FRF/transient estimation with a model-order guess.
///
/// # Safety
/// Same buffer contract as [`fdwfl_evaluate`].
#[no_mangle]
pub unsafe extern "C" fn fdwfl_estimate_noisy(
    data: *const FdwflData,
    z_re: f64,
    z_im: f64,
    uz: *const f64,
    n_x_guess: usize,
    yz: *mut f64,
    tz: *mut f64,
    condition: *mut f64,
) -> FdwflStatus {
    let data = nonnull!(data);
    if uz.is_null() || yz.is_null() || tz.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    let n_u = data.inner.n_u();
    let uz_slice = std::slice::from_raw_parts(uz, 2 * n_u);
    let uz_vec = DVector::from_fn(n_u, |r, _| {
        Complex64::new(uz_slice[2 * r], uz_slice[2 * r + 1])
    });
    match estimate_noisy(&data.inner, Complex64::new(z_re, z_im), &uz_vec, n_x_guess) {
        Ok(result) => {
            write_complex(yz, &result.yz);
            write_complex(tz, &result.tz);
            if !condition.is_null() {
                *condition = result.condition;
            }
            FdwflStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Transient-aware membership test of a trajectory against the data.
///
/// `u` and `y` are row-major `(length x n_u)` and `(length x n_y)`.
///
/// # Safety
/// Buffers must match the advertised lengths.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_membership(
    data: *const FdwflData,
    u: *const f64,
    y: *const f64,
    length: usize,
    feasible: *mut bool,
    residual: *mut f64,
) -> FdwflStatus {
    let data = nonnull!(data);
    if u.is_null() || y.is_null() || feasible.is_null() || residual.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    if length == 0 {
        set_error("trajectory length must be at least 1".into());
        return FdwflStatus::InvalidArgument;
    }
    let (n_u, n_y) = (data.inner.n_u(), data.inner.n_y());
    let us = std::slice::from_raw_parts(u, length * n_u);
    let ys = std::slice::from_raw_parts(y, length * n_y);
    let traj = fdwfl::lti::Trajectory::new(
        (0..length)
            .map(|t| DVector::from_fn(n_u, |r, _| us[t * n_u + r]))
            .collect(),
        (0..length)
            .map(|t| DVector::from_fn(n_y, |r, _| ys[t * n_y + r]))
            .collect(),
    );
    let traj = match traj {
        Ok(t) => t,
        Err(e) => return fail(e),
    };
    match membership_transient(&data.inner, &traj) {
        Ok(solution) => {
            *feasible = solution.feasible;
            *residual = solution.residual;
            FdwflStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Synthesize the default odd-bin multisine period for grid size `m` into
/// a caller buffer of `2 * m` doubles.
///
/// # Safety
/// `out` must hold `2 * m` doubles.
#[no_mangle]
pub unsafe extern "C" fn fdwfl_multisine_period(m: usize, out: *mut f64) -> FdwflStatus {
    if out.is_null() {
        set_error("null pointer".into());
        return FdwflStatus::NullPointer;
    }
    let cfg = ExperimentConfig {
        m,
        ..ExperimentConfig::noise_free_case_study(0)
    };
    match multisine(&cfg) {
        Ok(signal) => {
            std::slice::from_raw_parts_mut(out, 2 * m).copy_from_slice(&signal);
            FdwflStatus::Ok
        }
        Err(e) => fail(e),
    }
}
