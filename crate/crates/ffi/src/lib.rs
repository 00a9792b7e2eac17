//! C ABI over the `kexpr` engine.
//!
//! Every object crosses the boundary as an opaque pointer created by a
//! `kexpr_*_new`/`kexpr_*_from_*` function and released with the matching
//! `kexpr_*_free`. Functions return a [`KexprStatus`]; on failure a
//! message is available from [`kexpr_last_error`] on the same thread.
//! Strings handed out by the library are NUL-terminated UTF-8 and must be
//! released with [`kexpr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use kexpr::cli::{config_from_params, parse_config, ParamFile};
use kexpr::engine::{self, RunConfig, RunResult};
use kexpr::evalkit::{self, parse_infix, synth_dataset, Dataset, Problem};
use kexpr::genome::Expr;
use kexpr::{Error, ErrorKind};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KexprStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Bad configuration or argument value.
    Config = 3,
    /// Bad data or unparseable expression.
    Data = 4,
    /// I/O or other runtime failure.
    Runtime = 5,
    /// Index out of range.
    OutOfRange = 6,
    /// The library panicked; the call had no effect.
    Panic = 7,
}

/// Opaque dataset handle.
pub struct KexprDataset(Dataset);

/// Opaque run configuration handle.
pub struct KexprConfig(RunConfig);

/// Opaque handle to a finished run.
pub struct KexprRun(RunResult);

/// Opaque parsed expression handle.
pub struct KexprExpr(Expr);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(KexprStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Config => KexprStatus::Config,
            ErrorKind::Data => KexprStatus::Data,
            ErrorKind::Runtime => KexprStatus::Runtime,
        };
        Fail(code, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KexprStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KexprStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            KexprStatus::Panic
        }
    }
}

unsafe fn arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(KexprStatus::NullArgument, format!("`{name}` is null")))
}

unsafe fn arg_mut<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Fail> {
    p.as_mut()
        .ok_or_else(|| Fail(KexprStatus::NullArgument, format!("`{name}` is null")))
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(KexprStatus::NullArgument, format!("`{name}` is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(KexprStatus::InvalidUtf8, format!("`{name}` is not UTF-8")))
}

unsafe fn out<T>(slot: *mut *mut T, value: T) -> Result<(), Fail> {
    let slot = arg_mut(slot, "out")?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

fn c_string(s: &str) -> Result<*mut c_char, Fail> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Fail(KexprStatus::Runtime, "string contains NUL".into()))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(p))));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kexpr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn kexpr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Generates a synthetic dataset: `problem` is `"tp1"`, `"tp2"` or `"dew"`.
///
/// # Safety
/// `problem` must be a NUL-terminated string; `out_dataset` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kexpr_dataset_synth(
    problem: *const c_char,
    rows: usize,
    seed: u64,
    out_dataset: *mut *mut KexprDataset,
) -> KexprStatus {
    guard(|| {
        let p: Problem = text(problem, "problem")?.parse()?;
        out(out_dataset, KexprDataset(synth_dataset(p, rows, seed)?))
    })
}

/// Loads a CSV dataset. `target` may be null for the last column.
///
/// # Safety
/// `path` and a non-null `target` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn kexpr_dataset_from_csv(
    path: *const c_char,
    target: *const c_char,
    out_dataset: *mut *mut KexprDataset,
) -> KexprStatus {
    guard(|| {
        let path = text(path, "path")?;
        let target = if target.is_null() { None } else { Some(text(target, "target")?) };
        let ds = kexpr::cli::load_dataset(Path::new(path), target)?;
        out(out_dataset, KexprDataset(ds))
    })
}

/// Number of rows.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_dataset_rows(dataset: *const KexprDataset, out_rows: *mut usize) -> KexprStatus {
    guard(|| {
        *arg_mut(out_rows, "out_rows")? = arg(dataset, "dataset")?.0.len();
        Ok(())
    })
}

/// # Safety
/// `dataset` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kexpr_dataset_free(dataset: *mut KexprDataset) {
    free(dataset)
}

/// Default run configuration.
///
/// # Safety
/// `out_config` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn kexpr_config_new(out_config: *mut *mut KexprConfig) -> KexprStatus {
    guard(|| out(out_config, KexprConfig(RunConfig::default())))
}

/// Reads a `key = value` parameter file.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kexpr_config_from_file(path: *const c_char, out_config: *mut *mut KexprConfig) -> KexprStatus {
    guard(|| {
        let c = parse_config(Path::new(text(path, "path")?))?;
        out(out_config, KexprConfig(c.config))
    })
}

/// Parses parameter-file text.
///
/// # Safety
/// `params` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kexpr_config_from_string(
    params: *const c_char,
    out_config: *mut *mut KexprConfig,
) -> KexprStatus {
    guard(|| {
        let c = config_from_params(&ParamFile::parse(text(params, "params")?)?)?;
        out(out_config, KexprConfig(c.config))
    })
}

/// # Safety
/// `config` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_config_set_seed(config: *mut KexprConfig, seed: u64) -> KexprStatus {
    guard(|| {
        arg_mut(config, "config")?.0.seed = seed;
        Ok(())
    })
}

/// # Safety
/// `config` must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_config_set_generations(config: *mut KexprConfig, generations: usize) -> KexprStatus {
    guard(|| {
        arg_mut(config, "config")?.0.generations = generations;
        Ok(())
    })
}

/// Selects `"gep"`, `"nsga2"` or `"spea2"`.
///
/// # Safety
/// `config` must be valid and `algorithm` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kexpr_config_set_algorithm(config: *mut KexprConfig, algorithm: *const c_char) -> KexprStatus {
    guard(|| {
        let a = text(algorithm, "algorithm")?.parse()?;
        arg_mut(config, "config")?.0.algorithm = a;
        Ok(())
    })
}

/// # Safety
/// `config` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kexpr_config_free(config: *mut KexprConfig) {
    free(config)
}

/// Runs one evolution. Blocks until done.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_run(
    config: *const KexprConfig,
    train: *const KexprDataset,
    out_run: *mut *mut KexprRun,
) -> KexprStatus {
    guard(|| {
        let r = engine::run(&arg(config, "config")?.0, &arg(train, "train")?.0)?;
        out(out_run, KexprRun(r))
    })
}

/// Number of models on the final front (1 for plain GEP).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_run_front_len(run: *const KexprRun, out_len: *mut usize) -> KexprStatus {
    guard(|| {
        *arg_mut(out_len, "out_len")? = arg(run, "run")?.0.front.len();
        Ok(())
    })
}

/// Objectives of front member `index` (sorted by error).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_run_front_objectives(
    run: *const KexprRun,
    index: usize,
    out_error: *mut f64,
    out_size: *mut usize,
) -> KexprStatus {
    guard(|| {
        let r = &arg(run, "run")?.0;
        let ind = r
            .front
            .get(index)
            .ok_or_else(|| Fail(KexprStatus::OutOfRange, format!("front index {index} out of range")))?;
        *arg_mut(out_error, "out_error")? = ind.objectives.error;
        *arg_mut(out_size, "out_size")? = ind.objectives.size;
        Ok(())
    })
}

/// Infix form of front member `index`; free with [`kexpr_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_run_front_infix(
    run: *const KexprRun,
    index: usize,
    out_text: *mut *mut c_char,
) -> KexprStatus {
    guard(|| {
        let r = &arg(run, "run")?.0;
        let ind = r
            .front
            .get(index)
            .ok_or_else(|| Fail(KexprStatus::OutOfRange, format!("front index {index} out of range")))?;
        *arg_mut(out_text, "out_text")? = c_string(&r.infix(ind))?;
        Ok(())
    })
}

/// Infix form of the run's best model (the knee point for multi-objective
/// runs); free with [`kexpr_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_run_best_infix(run: *const KexprRun, out_text: *mut *mut c_char) -> KexprStatus {
    guard(|| {
        let r = &arg(run, "run")?.0;
        *arg_mut(out_text, "out_text")? = c_string(&r.infix(&r.best))?;
        Ok(())
    })
}

/// # Safety
/// `run` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kexpr_run_free(run: *mut KexprRun) {
    free(run)
}

/// Parses an infix expression.
///
/// # Safety
/// `text` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kexpr_expr_parse(expression: *const c_char, out_expr: *mut *mut KexprExpr) -> KexprStatus {
    guard(|| {
        let e = parse_infix(text(expression, "expression")?)?;
        out(out_expr, KexprExpr(e))
    })
}

/// Node count; with `genes > 0`, the top-level `+` links between that many
/// genes are not counted.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_expr_size(expr: *const KexprExpr, genes: usize, out_size: *mut usize) -> KexprStatus {
    guard(|| {
        let e = &arg(expr, "expr")?.0;
        let n = if genes == 0 { e.size() } else { evalkit::size_with_genes(e, genes)? };
        *arg_mut(out_size, "out_size")? = n;
        Ok(())
    })
}

/// RRSE of an expression over a dataset, skipping rows where it is not
/// finite; `out_invalid` (may be null) receives the skipped row count.
///
/// # Safety
/// Pointers must be valid; `out_invalid` may be null.
#[no_mangle]
pub unsafe extern "C" fn kexpr_expr_rrse(
    expr: *const KexprExpr,
    dataset: *const KexprDataset,
    out_rrse: *mut f64,
    out_invalid: *mut usize,
) -> KexprStatus {
    guard(|| {
        let p = engine::predict(&arg(expr, "expr")?.0, &arg(dataset, "dataset")?.0)?;
        let e = p
            .rrse
            .ok_or_else(|| Fail(KexprStatus::Data, "RRSE undefined: fewer than two valid rows".into()))?;
        *arg_mut(out_rrse, "out_rrse")? = e;
        if let Some(slot) = out_invalid.as_mut() {
            *slot = p.invalid_rows;
        }
        Ok(())
    })
}

/// # Safety
/// `expr` must come from this library; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kexpr_expr_free(expr: *mut KexprExpr) {
    free(expr)
}

/// Parses `expression` and writes its node count (see [`kexpr_expr_size`]).
///
/// # Safety
/// `expression` must be NUL-terminated; `out_size` valid.
#[no_mangle]
pub unsafe extern "C" fn kexpr_size_of(expression: *const c_char, genes: usize, out_size: *mut usize) -> KexprStatus {
    guard(|| {
        let g = (genes > 0).then_some(genes);
        *arg_mut(out_size, "out_size")? = kexpr::cli::cmd_size(text(expression, "expression")?, g)?;
        Ok(())
    })
}

/// RRSE of `n` predictions against `n` targets.
///
/// # Safety
/// `predictions` and `targets` must point to `n` doubles each.
#[no_mangle]
pub unsafe extern "C" fn kexpr_rrse(
    predictions: *const f64,
    targets: *const f64,
    n: usize,
    out_rrse: *mut f64,
) -> KexprStatus {
    guard(|| {
        let p = std::slice::from_raw_parts(arg(predictions, "predictions")?, n);
        let t = std::slice::from_raw_parts(arg(targets, "targets")?, n);
        *arg_mut(out_rrse, "out_rrse")? = evalkit::rrse(p, t)?;
        Ok(())
    })
}
