//! C ABI for `hardylab`.
//!
//! Every fallible call returns an [`HlStatus`] and writes its result through
//! an out-pointer. On failure `hl_last_error_message` describes the error
//! for the calling thread. Step functions and sweep results are opaque
//! handles released with their `_free` function; strings returned by the
//! library are released with [`hl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hardylab::grid::{read_step_function, write_step_function};
use hardylab::inequalities::{sharp_constant, Evaluator, Kind, RatioReport};
use hardylab::operators::{rellich_inner, supmin_transform};
use hardylab::rearrange::decreasing_rearrangement;
use hardylab::sharpness::{
    minimizing_function, sharpness_sweep_with, CutoffSpec, SweepConfig, SweepResult,
};
use hardylab::{p_norm, Exponent, HardyError, StepFunction};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlStatus {
    Ok = 0,
    InvalidParameter = 1,
    DivergentIntegral = 2,
    ZeroDenominator = 3,
    FitDegenerate = 4,
    MalformedCsv = 5,
    Io = 6,
    NullPointer = 7,
    InvalidUtf8 = 8,
    Panic = 9,
}

/// Inequality selector for `kind` arguments.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlKind {
    Hardy = 0,
    NewHardy = 1,
    HardyRellichInt = 2,
    ImprovedHardyRellich = 3,
    RellichP = 4,
    RellichChain = 5,
}

/// Cutoff selector for `cutoff` arguments.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HlCutoff {
    QuinticSmoothstep = 0,
    Linear = 1,
}

/// A step function on `(0, R]`.
pub struct HlStepFunction(StepFunction);

/// Result of an ε-sweep.
pub struct HlSweepResult(SweepResult);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct HlRatioReport {
    pub kind: u32,
    pub p: f64,
    pub numerator: f64,
    /// Meaningful only when `has_middle` is non-zero.
    pub middle: f64,
    pub has_middle: u8,
    pub denominator: f64,
    pub sharp: f64,
    pub ratio: f64,
    pub slack: f64,
    pub quad_order: usize,
    pub refinement_estimate: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(HlStatus, String);

impl From<HardyError> for Failure {
    fn from(e: HardyError) -> Self {
        let status = match &e {
            HardyError::InvalidParameter(_) => HlStatus::InvalidParameter,
            HardyError::DivergentIntegral(_) => HlStatus::DivergentIntegral,
            HardyError::ZeroDenominator => HlStatus::ZeroDenominator,
            HardyError::FitDegenerate(_) => HlStatus::FitDegenerate,
            HardyError::MalformedCsv(_) => HlStatus::MalformedCsv,
            HardyError::Io(_) | HardyError::Json(_) => HlStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> HlStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            HlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HlStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(HlStatus::NullPointer, format!("{what} is null"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn path_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(HlStatus::InvalidUtf8, "path is not valid UTF-8".into()))
}

fn kind_arg(k: u32) -> Result<Kind, Failure> {
    Kind::ALL
        .get(k as usize)
        .copied()
        .ok_or_else(|| Failure(HlStatus::InvalidParameter, format!("unknown kind {k}")))
}

fn cutoff_arg(c: u32) -> Result<CutoffSpec, Failure> {
    match c {
        0 => Ok(CutoffSpec::QuinticSmoothstep),
        1 => Ok(CutoffSpec::Linear),
        _ => Err(Failure(
            HlStatus::InvalidParameter,
            format!("unknown cutoff {c}"),
        )),
    }
}

fn boxed(f: StepFunction) -> *mut HlStepFunction {
    Box::into_raw(Box::new(HlStepFunction(f)))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(HlStatus::InvalidUtf8, "string contains NUL".into()))
}

fn c_report(r: &RatioReport) -> HlRatioReport {
    HlRatioReport {
        kind: Kind::ALL.iter().position(|&k| k == r.kind).unwrap_or(0) as u32,
        p: r.p,
        numerator: r.numerator,
        middle: r.middle.unwrap_or(0.0),
        has_middle: r.middle.is_some() as u8,
        denominator: r.denominator,
        sharp: r.sharp,
        ratio: r.ratio,
        slack: r.slack,
        quad_order: r.quad_order,
        refinement_estimate: r.refinement_estimate,
    }
}

/// Message for the last failed call on this thread; empty after a
/// successful call. Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn hl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a step function from `n_values + 1` edges starting at 0.
///
/// # Safety
/// `edges` and `values` must point to `n_edges` and `n_values` readable
/// doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_step_function_new(
    edges: *const f64,
    n_edges: usize,
    values: *const f64,
    n_values: usize,
    out: *mut *mut HlStepFunction,
) -> HlStatus {
    guard(|| {
        let e = slice(edges, n_edges, "edges")?.to_vec();
        let v = slice(values, n_values, "values")?.to_vec();
        let f = StepFunction::from_edges(e, v)?;
        put(out, boxed(f))
    })
}

/// # Safety
/// `f` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_step_function_free(f: *mut HlStepFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_step_function_cell_count(
    f: *const HlStepFunction,
    out: *mut usize,
) -> HlStatus {
    guard(|| put(out, borrow(f, "function")?.0.cell_count()))
}

/// Copies the `cell_count + 1` edges into `buf` when `cap` is large enough;
/// `needed` always receives the required length.
///
/// # Safety
/// `f` must be a live handle, `buf` must have room for `cap` doubles and
/// `needed` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_step_function_edges(
    f: *const HlStepFunction,
    buf: *mut f64,
    cap: usize,
    needed: *mut usize,
) -> HlStatus {
    guard(|| copy_out(borrow(f, "function")?.0.edges(), buf, cap, needed))
}

/// Copies the cell values, same conventions as [`hl_step_function_edges`].
///
/// # Safety
/// As for [`hl_step_function_edges`].
#[no_mangle]
pub unsafe extern "C" fn hl_step_function_values(
    f: *const HlStepFunction,
    buf: *mut f64,
    cap: usize,
    needed: *mut usize,
) -> HlStatus {
    guard(|| copy_out(borrow(f, "function")?.0.values(), buf, cap, needed))
}

unsafe fn copy_out(
    src: &[f64],
    buf: *mut f64,
    cap: usize,
    needed: *mut usize,
) -> Result<(), Failure> {
    put(needed, src.len())?;
    if cap < src.len() {
        return Err(Failure(
            HlStatus::InvalidParameter,
            format!("buffer holds {cap} values, {} needed", src.len()),
        ));
    }
    if buf.is_null() {
        return Err(null("buffer"));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    Ok(())
}

/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_step_function_read_csv(
    path: *const c_char,
    out: *mut *mut HlStepFunction,
) -> HlStatus {
    guard(|| {
        let f = read_step_function(path_arg(path)?)?;
        put(out, boxed(f))
    })
}

/// # Safety
/// `f` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hl_step_function_write_csv(
    f: *const HlStepFunction,
    path: *const c_char,
) -> HlStatus {
    guard(|| {
        write_step_function(path_arg(path)?, &borrow(f, "function")?.0)?;
        Ok(())
    })
}

/// Decreasing rearrangement as a new handle.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_rearrange(
    f: *const HlStepFunction,
    out: *mut *mut HlStepFunction,
) -> HlStatus {
    guard(|| {
        let star = decreasing_rearrangement(&borrow(f, "function")?.0);
        put(out, boxed(star.into_function()))
    })
}

/// `∫ |f|^p`.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_p_norm(f: *const HlStepFunction, p: f64, out: *mut f64) -> HlStatus {
    guard(|| {
        let p = Exponent::new(p)?;
        put(out, p_norm(&borrow(f, "function")?.0, p))
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_sharp_constant(kind: u32, p: f64, out: *mut f64) -> HlStatus {
    guard(|| {
        let c = sharp_constant(kind_arg(kind)?, Exponent::new(p)?)?;
        put(out, c)
    })
}

/// Evaluates one inequality. `quad_order` 0 selects the default order.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_ratio(
    kind: u32,
    f: *const HlStepFunction,
    p: f64,
    quad_order: usize,
    out: *mut HlRatioReport,
) -> HlStatus {
    guard(|| {
        let rep = evaluate(kind, f, p, quad_order)?;
        put(out, c_report(&rep))
    })
}

/// As [`hl_ratio`], returning the report as a JSON string.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_ratio_json(
    kind: u32,
    f: *const HlStepFunction,
    p: f64,
    quad_order: usize,
    out: *mut *mut c_char,
) -> HlStatus {
    guard(|| {
        let rep = evaluate(kind, f, p, quad_order)?;
        let s = serde_json::to_string(&rep).map_err(HardyError::from)?;
        put(out, to_c_string(s)?)
    })
}

unsafe fn evaluate(
    kind: u32,
    f: *const HlStepFunction,
    p: f64,
    quad_order: usize,
) -> Result<RatioReport, Failure> {
    let kind = kind_arg(kind)?;
    let f = &borrow(f, "function")?.0;
    let p = Exponent::new(p)?;
    let ev = if quad_order == 0 {
        Evaluator::default()
    } else {
        Evaluator::new(quad_order)?
    };
    Ok(ev.ratio(kind, f, p)?)
}

/// `sup_s |min{1/r, 1/s} ∫₀ˢ f|`.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_supmin_transform(
    f: *const HlStepFunction,
    r: f64,
    out: *mut f64,
) -> HlStatus {
    guard(|| put(out, supmin_transform(&borrow(f, "function")?.0, r)?))
}

/// `τ · sup_s |min{1/τ, 1/s} ∫₀ˢ |f||`.
///
/// # Safety
/// `f` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_rellich_inner(
    f: *const HlStepFunction,
    tau: f64,
    out: *mut f64,
) -> HlStatus {
    guard(|| put(out, rellich_inner(&borrow(f, "function")?.0, tau)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_minimizing_function(
    p: f64,
    eps: f64,
    cutoff: u32,
    n_cells: usize,
    r_min: f64,
    out: *mut *mut HlStepFunction,
) -> HlStatus {
    guard(|| {
        let f = minimizing_function(Exponent::new(p)?, eps, cutoff_arg(cutoff)?, n_cells, r_min)?;
        put(out, boxed(f))
    })
}

/// Runs an ε-sweep. `n_cells` 0 and `r_min` 0 select the defaults.
///
/// # Safety
/// `eps` must point to `n_eps` readable doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_sharpness_sweep(
    kind: u32,
    p: f64,
    eps: *const f64,
    n_eps: usize,
    cutoff: u32,
    n_cells: usize,
    r_min: f64,
    out: *mut *mut HlSweepResult,
) -> HlStatus {
    guard(|| {
        let eps = slice(eps, n_eps, "eps")?;
        let mut config = SweepConfig::default();
        if n_cells != 0 {
            config.n_cells = n_cells;
        }
        if r_min != 0.0 {
            config.r_min = r_min;
        }
        let res = sharpness_sweep_with(
            kind_arg(kind)?,
            Exponent::new(p)?,
            eps,
            cutoff_arg(cutoff)?,
            &config,
        )?;
        put(out, Box::into_raw(Box::new(HlSweepResult(res))))
    })
}

/// # Safety
/// `s` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hl_sweep_result_free(s: *mut HlSweepResult) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Extrapolated limit, sharp constant and relative gap.
///
/// # Safety
/// `s` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_sweep_result_summary(
    s: *const HlSweepResult,
    limit: *mut f64,
    sharp: *mut f64,
    relative_gap: *mut f64,
) -> HlStatus {
    guard(|| {
        let r = &borrow(s, "sweep result")?.0;
        put(limit, r.limit)?;
        put(sharp, r.sharp)?;
        put(relative_gap, r.relative_gap)
    })
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_sweep_result_len(s: *const HlSweepResult, out: *mut usize) -> HlStatus {
    guard(|| put(out, borrow(s, "sweep result")?.0.points.len()))
}

/// # Safety
/// `s` must be a live handle; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn hl_sweep_result_point(
    s: *const HlSweepResult,
    index: usize,
    eps: *mut f64,
    ratio: *mut f64,
    numerator: *mut f64,
    denominator: *mut f64,
) -> HlStatus {
    guard(|| {
        let r = &borrow(s, "sweep result")?.0;
        let pt = r.points.get(index).ok_or_else(|| {
            Failure(
                HlStatus::InvalidParameter,
                format!("index {index} out of range for {} points", r.points.len()),
            )
        })?;
        put(eps, pt.eps)?;
        put(ratio, pt.ratio)?;
        put(numerator, pt.numerator)?;
        put(denominator, pt.denominator)
    })
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn hl_sweep_result_json(
    s: *const HlSweepResult,
    out: *mut *mut c_char,
) -> HlStatus {
    guard(|| put(out, to_c_string(borrow(s, "sweep result")?.0.to_json())?))
}
