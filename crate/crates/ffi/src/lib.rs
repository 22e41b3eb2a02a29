//! C ABI over the solver core. Every entry point is panic-safe, reports
//! failures through [`RapidStatus`] plus a thread-local message, and hands
//! out opaque heap handles that the matching `_free` function releases.
//!
//! Matrices cross the boundary as row-major buffers: `a[i*d + j]` is row
//! `i`, column `j`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use rapid_core::cli::exit_code_for;
use rapid_core::data_io::Target;
use rapid_core::problems::{build_group_lasso, build_lasso, build_trace_norm, RegressionData};
use rapid_core::prox::GroupPartition;
use rapid_core::solver::solve;
use rapid_core::svm::{build_linear_kernel, solve_svm, SvmConfig, SvmProblem, SvmRule, SvmSolveResult};
use rapid_core::{DenseMatrix, DenseVector, Error, ProblemSpec, Rule, SolveResult, SolverConfig};

/// Outcome of an API call. Anything but `Ok` leaves a human-readable
/// explanation in `rapid_last_error()`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RapidStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Rejected input: shapes, labels, ranges, or an out-of-bounds index.
    BadArgument = 2,
    /// The computation itself failed: divergence, step underflow, or a
    /// projection that could not reach feasibility.
    NumericalFailure = 3,
    /// An internal invariant broke; the library state is still sound.
    Panic = 4,
}

/// Update rule of the composite-objective solver.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RapidRule {
    Fista = 0,
    Rapid1 = 1,
    Rapid2 = 2,
}

impl RapidRule {
    fn to_core(self) -> Rule {
        match self {
            RapidRule::Fista => Rule::Fista,
            RapidRule::Rapid1 => Rule::RapidI,
            RapidRule::Rapid2 => Rule::RapidII,
        }
    }
}

/// Update rule of the SVM dual solver.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RapidSvmRule {
    Apg = 0,
    SvmRapid1 = 1,
    SvmRapid2 = 2,
}

impl RapidSvmRule {
    fn to_core(self) -> SvmRule {
        match self {
            RapidSvmRule::Apg => SvmRule::Apg,
            RapidSvmRule::SvmRapid1 => SvmRule::RapidI,
            RapidSvmRule::SvmRapid2 => SvmRule::RapidII,
        }
    }
}

/// One recorded iteration of a solve.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct RapidTraceRow {
    pub t: u64,
    pub f_x: f64,
    pub f_theta_x: f64,
    pub theta: f64,
    pub eta: f64,
    pub gamma: f64,
    pub elapsed_ns: u64,
}

/// A composite regression problem (opaque).
pub struct RapidProblem {
    inner: ProblemSpec,
}

/// A finished solve: final point, trace, and diagnostics (opaque).
pub struct RapidSolution {
    inner: SolveResult,
    objective: f64,
}

/// A kernel SVM dual problem (opaque).
pub struct RapidSvmProblem {
    inner: SvmProblem,
}

/// A finished SVM solve (opaque).
pub struct RapidSvmSolution {
    inner: SvmSolveResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let clean: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(clean).unwrap_or_default();
    });
}

fn fail(e: &Error) -> RapidStatus {
    set_error(&e.to_string());
    if exit_code_for(e) == 2 {
        RapidStatus::NumericalFailure
    } else {
        RapidStatus::BadArgument
    }
}

fn null_arg(what: &str) -> RapidStatus {
    set_error(&format!("{what} must not be null"));
    RapidStatus::NullArgument
}

fn bad_arg(msg: &str) -> RapidStatus {
    set_error(msg);
    RapidStatus::BadArgument
}

/// Runs a closure with a panic fence; the process never unwinds across the
/// C boundary.
fn guarded(f: impl FnOnce() -> RapidStatus) -> RapidStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            RapidStatus::Panic
        }
    }
}

unsafe fn slice_in<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if len == 0 {
        Some(&[])
    } else if ptr.is_null() {
        None
    } else {
        Some(slice::from_raw_parts(ptr, len))
    }
}

fn matrix_row_major(rows: usize, cols: usize, a: &[f64]) -> Result<DenseMatrix, Error> {
    DenseMatrix::from_fn(rows, cols, |i, j| a[i * cols + j])
}

fn checked_len(n: usize, d: usize) -> Result<usize, RapidStatus> {
    n.checked_mul(d)
        .ok_or_else(|| bad_arg("matrix size overflows"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rapid_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message from the most recent failing call on this thread. The pointer
/// stays valid until the next failing call on the same thread. Never null;
/// empty when no error has been recorded.
#[no_mangle]
pub extern "C" fn rapid_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn build_regression(
    n: usize,
    d: usize,
    a: *const f64,
    y: *const f64,
    y_len: usize,
    out: *mut *mut RapidProblem,
    build: impl FnOnce(DenseMatrix, &[f64]) -> Result<ProblemSpec, Error>,
) -> RapidStatus {
    if out.is_null() {
        return null_arg("out");
    }
    let total = match checked_len(n, d) {
        Ok(t) => t,
        Err(s) => return s,
    };
    let Some(a) = slice_in(a, total) else {
        return null_arg("a");
    };
    let Some(y) = slice_in(y, y_len) else {
        return null_arg("y");
    };
    let mat = match matrix_row_major(n, d, a) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    match build(mat, y) {
        Ok(spec) => {
            *out = Box::into_raw(Box::new(RapidProblem { inner: spec }));
            RapidStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Least squares with an l1 penalty. `a` is `n x d` row-major, `y` has `n`
/// entries, `lambda` is the penalty weight. On success writes a handle to
/// `*out`; release it with `rapid_problem_free`.
///
/// # Safety
/// `a` and `y` must point to buffers of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn rapid_problem_lasso(
    n: usize,
    d: usize,
    a: *const f64,
    y: *const f64,
    lambda: f64,
    out: *mut *mut RapidProblem,
) -> RapidStatus {
    guarded(|| {
        build_regression(n, d, a, y, n, out, |mat, y| {
            build_lasso(RegressionData {
                a: mat,
                target: Target::Single(DenseVector::new(y.to_vec())),
                lambda,
                groups: None,
            })
        })
    })
}

/// Least squares with a group l2 penalty over contiguous groups of
/// `group_size` coordinates (the last group may be shorter).
///
/// # Safety
/// `a` and `y` must point to buffers of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn rapid_problem_group_lasso(
    n: usize,
    d: usize,
    a: *const f64,
    y: *const f64,
    lambda: f64,
    group_size: usize,
    out: *mut *mut RapidProblem,
) -> RapidStatus {
    guarded(|| {
        build_regression(n, d, a, y, n, out, |mat, y| {
            let groups = GroupPartition::contiguous(d, group_size)?;
            build_group_lasso(RegressionData {
                a: mat,
                target: Target::Single(DenseVector::new(y.to_vec())),
                lambda,
                groups: Some(groups),
            })
        })
    })
}

/// Multitask least squares with a trace-norm penalty. `y` is `n x m`
/// row-major; the unknowns form a `d x m` matrix flattened column by column
/// in the solution vector.
///
/// # Safety
/// `a` and `y` must point to buffers of the stated sizes.
#[no_mangle]
pub unsafe extern "C" fn rapid_problem_trace_norm(
    n: usize,
    d: usize,
    m: usize,
    a: *const f64,
    y: *const f64,
    lambda: f64,
    out: *mut *mut RapidProblem,
) -> RapidStatus {
    guarded(|| {
        let y_len = match checked_len(n, m) {
            Ok(t) => t,
            Err(s) => return s,
        };
        build_regression(n, d, a, y, y_len, out, |mat, y| {
            let targets = DenseMatrix::from_fn(n, m, |i, k| y[i * m + k])?;
            build_trace_norm(RegressionData {
                a: mat,
                target: Target::Multi(targets),
                lambda,
                groups: None,
            })
        })
    })
}

/// Number of unknowns of the flattened problem; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rapid_problem_dim(p: *const RapidProblem) -> usize {
    if p.is_null() {
        return 0;
    }
    unsafe { (*p).inner.dim() }
}

/// Gradient Lipschitz constant the solver uses for its fixed step.
#[no_mangle]
pub extern "C" fn rapid_problem_lipschitz(p: *const RapidProblem) -> f64 {
    if p.is_null() {
        return f64::NAN;
    }
    unsafe { (*p).inner.lipschitz() }
}

/// Composite objective value at a caller-supplied point of length
/// `rapid_problem_dim(p)`.
///
/// # Safety
/// `x` must point to `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn rapid_problem_objective(
    p: *const RapidProblem,
    x: *const f64,
    len: usize,
    value: *mut f64,
) -> RapidStatus {
    guarded(|| {
        if p.is_null() {
            return null_arg("problem");
        }
        if value.is_null() {
            return null_arg("value");
        }
        let Some(x) = slice_in(x, len) else {
            return null_arg("x");
        };
        let p = &(*p).inner;
        if len != p.dim() {
            return bad_arg(&format!("point length {len} against dimension {}", p.dim()));
        }
        match p.objective(&DenseVector::new(x.to_vec())) {
            Ok(v) => {
                *value = v;
                RapidStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

#[no_mangle]
pub extern "C" fn rapid_problem_free(p: *mut RapidProblem) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Runs the chosen rule. `x0` may be null for the zero start; otherwise it
/// must hold `rapid_problem_dim(p)` doubles. On success writes a handle to
/// `*out`; release it with `rapid_solution_free`.
///
/// # Safety
/// `x0`, when non-null, must point to `rapid_problem_dim(p)` doubles.
#[no_mangle]
pub unsafe extern "C" fn rapid_solve(
    p: *const RapidProblem,
    rule: RapidRule,
    max_iter: usize,
    rel_tol: f64,
    x0: *const f64,
    out: *mut *mut RapidSolution,
) -> RapidStatus {
    guarded(|| {
        if p.is_null() {
            return null_arg("problem");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let p = &(*p).inner;
        let start = if x0.is_null() {
            DenseVector::zeros(p.dim())
        } else {
            DenseVector::new(slice::from_raw_parts(x0, p.dim()).to_vec())
        };
        let mut cfg = SolverConfig::new(rule.to_core());
        cfg.max_iter = max_iter;
        cfg.rel_tol = rel_tol;
        match solve(p, &cfg, &start) {
            Ok(res) => match p.objective(&res.point) {
                Ok(objective) => {
                    *out = Box::into_raw(Box::new(RapidSolution { inner: res, objective }));
                    RapidStatus::Ok
                }
                Err(e) => fail(&e),
            },
            Err(e) => fail(&e),
        }
    })
}

/// True when the relative-change stopping rule fired before the iteration
/// budget ran out.
#[no_mangle]
pub extern "C" fn rapid_solution_converged(r: *const RapidSolution) -> bool {
    !r.is_null() && unsafe { (*r).inner.converged }
}

#[no_mangle]
pub extern "C" fn rapid_solution_iterations(r: *const RapidSolution) -> usize {
    if r.is_null() {
        return 0;
    }
    unsafe { (*r).inner.iterations }
}

/// Objective value at the returned point.
#[no_mangle]
pub extern "C" fn rapid_solution_objective(r: *const RapidSolution) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    unsafe { (*r).objective }
}

#[no_mangle]
pub extern "C" fn rapid_solution_dim(r: *const RapidSolution) -> usize {
    if r.is_null() {
        return 0;
    }
    unsafe { (*r).inner.point.len() }
}

/// Copies the solution point into `buf`, which must hold exactly
/// `rapid_solution_dim(r)` doubles.
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rapid_solution_point(
    r: *const RapidSolution,
    buf: *mut f64,
    len: usize,
) -> RapidStatus {
    guarded(|| {
        if r.is_null() {
            return null_arg("solution");
        }
        if buf.is_null() {
            return null_arg("buf");
        }
        let point = &(*r).inner.point;
        if len != point.len() {
            return bad_arg(&format!("buffer length {len} against dimension {}", point.len()));
        }
        slice::from_raw_parts_mut(buf, len).copy_from_slice(point.as_slice());
        RapidStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn rapid_solution_trace_len(r: *const RapidSolution) -> usize {
    if r.is_null() {
        return 0;
    }
    unsafe { (*r).inner.trace.len() }
}

/// Copies trace record `idx` (0-based) into `*row`.
///
/// # Safety
/// `row` must point to a writable `RapidTraceRow`.
#[no_mangle]
pub unsafe extern "C" fn rapid_solution_trace_row(
    r: *const RapidSolution,
    idx: usize,
    row: *mut RapidTraceRow,
) -> RapidStatus {
    guarded(|| {
        if r.is_null() {
            return null_arg("solution");
        }
        if row.is_null() {
            return null_arg("row");
        }
        let trace = &(*r).inner.trace;
        let Some(rec) = trace.get(idx) else {
            return bad_arg(&format!("trace index {idx} against length {}", trace.len()));
        };
        *row = RapidTraceRow {
            t: rec.t as u64,
            f_x: rec.f_x,
            f_theta_x: rec.f_theta_x,
            theta: rec.theta,
            eta: rec.eta,
            gamma: rec.gamma,
            elapsed_ns: rec.elapsed_ns,
        };
        RapidStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn rapid_solution_free(r: *mut RapidSolution) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}

/// Builds the dual of a linear-kernel SVM from `n` points with `d` features
/// (row-major `x`) and labels `y` in {-1, +1}, box bound `c`. Release the
/// handle with `rapid_svm_problem_free`.
///
/// # Safety
/// `x` must point to `n * d` doubles and `y` to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn rapid_svm_linear(
    n: usize,
    d: usize,
    x: *const f64,
    y: *const f64,
    c: f64,
    out: *mut *mut RapidSvmProblem,
) -> RapidStatus {
    guarded(|| {
        if out.is_null() {
            return null_arg("out");
        }
        let total = match checked_len(n, d) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(x) = slice_in(x, total) else {
            return null_arg("x");
        };
        let Some(y) = slice_in(y, n) else {
            return null_arg("y");
        };
        let mat = match matrix_row_major(n, d, x) {
            Ok(m) => m,
            Err(e) => return fail(&e),
        };
        match build_linear_kernel(&mat, &DenseVector::new(y.to_vec()), c) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(RapidSvmProblem { inner: p }));
                RapidStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of training points; 0 for a null handle.
#[no_mangle]
pub extern "C" fn rapid_svm_problem_len(p: *const RapidSvmProblem) -> usize {
    if p.is_null() {
        return 0;
    }
    unsafe { (*p).inner.len() }
}

#[no_mangle]
pub extern "C" fn rapid_svm_problem_free(p: *mut RapidSvmProblem) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Solves the dual with the chosen rule. On success writes a handle to
/// `*out`; release it with `rapid_svm_solution_free`.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn rapid_svm_solve(
    p: *const RapidSvmProblem,
    rule: RapidSvmRule,
    max_iter: usize,
    rel_tol: f64,
    out: *mut *mut RapidSvmSolution,
) -> RapidStatus {
    guarded(|| {
        if p.is_null() {
            return null_arg("problem");
        }
        if out.is_null() {
            return null_arg("out");
        }
        let mut cfg = SvmConfig::new(rule.to_core());
        cfg.max_iter = max_iter;
        cfg.rel_tol = rel_tol;
        match solve_svm(&(*p).inner, &cfg) {
            Ok(res) => {
                *out = Box::into_raw(Box::new(RapidSvmSolution { inner: res }));
                RapidStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Dual objective at the returned multipliers.
#[no_mangle]
pub extern "C" fn rapid_svm_solution_objective(r: *const RapidSvmSolution) -> f64 {
    if r.is_null() {
        return f64::NAN;
    }
    unsafe { (*r).inner.objective }
}

#[no_mangle]
pub extern "C" fn rapid_svm_solution_iterations(r: *const RapidSvmSolution) -> usize {
    if r.is_null() {
        return 0;
    }
    unsafe { (*r).inner.iterations }
}

#[no_mangle]
pub extern "C" fn rapid_svm_solution_converged(r: *const RapidSvmSolution) -> bool {
    !r.is_null() && unsafe { (*r).inner.converged }
}

#[no_mangle]
pub extern "C" fn rapid_svm_solution_len(r: *const RapidSvmSolution) -> usize {
    if r.is_null() {
        return 0;
    }
    unsafe { (*r).inner.alpha.len() }
}

/// Copies the dual multipliers into `buf`, which must hold exactly
/// `rapid_svm_solution_len(r)` doubles.
///
/// # Safety
/// `buf` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn rapid_svm_solution_alpha(
    r: *const RapidSvmSolution,
    buf: *mut f64,
    len: usize,
) -> RapidStatus {
    guarded(|| {
        if r.is_null() {
            return null_arg("solution");
        }
        if buf.is_null() {
            return null_arg("buf");
        }
        let alpha = &(*r).inner.alpha;
        if len != alpha.len() {
            return bad_arg(&format!("buffer length {len} against {} points", alpha.len()));
        }
        slice::from_raw_parts_mut(buf, len).copy_from_slice(alpha.as_slice());
        RapidStatus::Ok
    })
}

#[no_mangle]
pub extern "C" fn rapid_svm_solution_free(r: *mut RapidSvmSolution) {
    if !r.is_null() {
        drop(unsafe { Box::from_raw(r) });
    }
}
