// Exercises the C entry points from Rust: handle lifecycles, status codes,
// null and shape rejection, and numeric sanity of what comes back.

use std::ffi::CStr;
use std::ptr;

use rapid_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(rapid_last_error()) }
        .to_string_lossy()
        .into_owned()
}

/// 12-point ridge of data with a planted sign split; enough structure for
/// both the regression and the SVM paths.
fn toy_design(n: usize, d: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![0.0; n * d];
    let mut y = vec![0.0; n];
    let mut s = 0x9e3779b97f4a7c15_u64;
    let mut rnd = || {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((s >> 11) as f64) / ((1_u64 << 53) as f64) - 0.5
    };
    for i in 0..n {
        for j in 0..d {
            a[i * d + j] = rnd();
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        a[i * d] += sign; // first feature carries the signal
        y[i] = sign;
    }
    (a, y)
}

#[test]
fn lasso_round_trip_through_the_c_api() {
    let (n, d) = (12, 5);
    let (a, y) = toy_design(n, d);
    let mut problem: *mut RapidProblem = ptr::null_mut();
    let st = unsafe { rapid_problem_lasso(n, d, a.as_ptr(), y.as_ptr(), 0.2, &mut problem) };
    assert_eq!(st, RapidStatus::Ok, "{}", last_error());
    assert_eq!(rapid_problem_dim(problem), d);
    assert!(rapid_problem_lipschitz(problem) > 0.0);

    let mut solution: *mut RapidSolution = ptr::null_mut();
    let st = unsafe {
        rapid_solve(problem, RapidRule::Rapid2, 500, 1e-10, ptr::null(), &mut solution)
    };
    assert_eq!(st, RapidStatus::Ok, "{}", last_error());
    assert!(rapid_solution_converged(solution));
    assert!(rapid_solution_iterations(solution) >= 1);
    assert_eq!(rapid_solution_dim(solution), d);

    let mut point = vec![0.0; d];
    let st = unsafe { rapid_solution_point(solution, point.as_mut_ptr(), d) };
    assert_eq!(st, RapidStatus::Ok);
    assert!(point.iter().all(|v| v.is_finite()));

    // the reported objective matches an evaluation at the returned point
    let mut value = f64::NAN;
    let st = unsafe { rapid_problem_objective(problem, point.as_ptr(), d, &mut value) };
    assert_eq!(st, RapidStatus::Ok);
    let reported = rapid_solution_objective(solution);
    assert!((value - reported).abs() <= 1e-12 * (1.0 + reported.abs()));

    // trace rows are addressable and ordered
    let len = rapid_solution_trace_len(solution);
    assert_eq!(len, rapid_solution_iterations(solution));
    let mut row = RapidTraceRow {
        t: 0,
        f_x: 0.0,
        f_theta_x: 0.0,
        theta: 0.0,
        eta: 0.0,
        gamma: 0.0,
        elapsed_ns: 0,
    };
    let st = unsafe { rapid_solution_trace_row(solution, len - 1, &mut row) };
    assert_eq!(st, RapidStatus::Ok);
    assert_eq!(row.t as usize, len);
    assert!(row.f_theta_x <= row.f_x + 1e-12 * (1.0 + row.f_x.abs()));

    rapid_solution_free(solution);
    rapid_problem_free(problem);
}

#[test]
fn group_lasso_and_trace_norm_build() {
    let (n, d, m) = (10, 6, 2);
    let (a, y) = toy_design(n, d);
    let mut p1: *mut RapidProblem = ptr::null_mut();
    let st =
        unsafe { rapid_problem_group_lasso(n, d, a.as_ptr(), y.as_ptr(), 0.3, 2, &mut p1) };
    assert_eq!(st, RapidStatus::Ok, "{}", last_error());
    assert_eq!(rapid_problem_dim(p1), d);
    rapid_problem_free(p1);

    let (ym, _) = toy_design(n, m);
    let mut p2: *mut RapidProblem = ptr::null_mut();
    let st = unsafe {
        rapid_problem_trace_norm(n, d, m, a.as_ptr(), ym.as_ptr(), 0.3, &mut p2)
    };
    assert_eq!(st, RapidStatus::Ok, "{}", last_error());
    assert_eq!(rapid_problem_dim(p2), d * m);
    rapid_problem_free(p2);
}

#[test]
fn svm_round_trip_through_the_c_api() {
    let (n, d) = (16, 3);
    let (x, y) = toy_design(n, d);
    let c = 1.0;
    let mut problem: *mut RapidSvmProblem = ptr::null_mut();
    let st = unsafe { rapid_svm_linear(n, d, x.as_ptr(), y.as_ptr(), c, &mut problem) };
    assert_eq!(st, RapidStatus::Ok, "{}", last_error());
    assert_eq!(rapid_svm_problem_len(problem), n);

    let mut solution: *mut RapidSvmSolution = ptr::null_mut();
    let st = unsafe {
        rapid_svm_solve(problem, RapidSvmRule::SvmRapid2, 2000, 1e-9, &mut solution)
    };
    assert_eq!(st, RapidStatus::Ok, "{}", last_error());
    assert_eq!(rapid_svm_solution_len(solution), n);
    assert!(rapid_svm_solution_objective(solution) <= 0.0);
    assert!(rapid_svm_solution_iterations(solution) >= 1);

    let mut alpha = vec![-1.0; n];
    let st = unsafe { rapid_svm_solution_alpha(solution, alpha.as_mut_ptr(), n) };
    assert_eq!(st, RapidStatus::Ok);
    let eps = 1e-12;
    assert!(alpha.iter().all(|&v| (-eps..=c + eps).contains(&v)));
    let balance: f64 = alpha.iter().zip(&y).map(|(a, b)| a * b).sum();
    assert!(balance.abs() <= 1e-7 * n as f64);

    rapid_svm_solution_free(solution);
    rapid_svm_problem_free(problem);
}

#[test]
fn null_and_shape_errors_are_reported() {
    let (a, y) = toy_design(4, 3);

    // null out slot
    let st = unsafe { rapid_problem_lasso(4, 3, a.as_ptr(), y.as_ptr(), 0.1, ptr::null_mut()) };
    assert_eq!(st, RapidStatus::NullArgument);
    assert!(!last_error().is_empty());

    // null data
    let mut p: *mut RapidProblem = ptr::null_mut();
    let st = unsafe { rapid_problem_lasso(4, 3, ptr::null(), y.as_ptr(), 0.1, &mut p) };
    assert_eq!(st, RapidStatus::NullArgument);

    // rejected input surfaces the library's own message
    let st = unsafe { rapid_problem_lasso(4, 3, a.as_ptr(), y.as_ptr(), -1.0, &mut p) };
    assert_eq!(st, RapidStatus::BadArgument);
    assert!(last_error().contains("lambda") || last_error().contains("penalty"));

    // labels must be +-1 for the SVM builder
    let bad_y = vec![0.5; 4];
    let mut sp: *mut RapidSvmProblem = ptr::null_mut();
    let st = unsafe { rapid_svm_linear(4, 3, a.as_ptr(), bad_y.as_ptr(), 1.0, &mut sp) };
    assert_eq!(st, RapidStatus::BadArgument);

    // null handles degrade to inert defaults
    assert_eq!(rapid_problem_dim(ptr::null()), 0);
    assert!(rapid_problem_lipschitz(ptr::null()).is_nan());
    assert_eq!(rapid_solution_trace_len(ptr::null()), 0);
    assert!(!rapid_svm_solution_converged(ptr::null()));
    rapid_problem_free(ptr::null_mut());
    rapid_solution_free(ptr::null_mut());
    rapid_svm_problem_free(ptr::null_mut());
    rapid_svm_solution_free(ptr::null_mut());
}

#[test]
fn buffer_length_mismatches_are_rejected() {
    let (n, d) = (8, 4);
    let (a, y) = toy_design(n, d);
    let mut problem: *mut RapidProblem = ptr::null_mut();
    let st = unsafe { rapid_problem_lasso(n, d, a.as_ptr(), y.as_ptr(), 0.2, &mut problem) };
    assert_eq!(st, RapidStatus::Ok);
    let mut solution: *mut RapidSolution = ptr::null_mut();
    let st = unsafe {
        rapid_solve(problem, RapidRule::Fista, 200, 1e-8, ptr::null(), &mut solution)
    };
    assert_eq!(st, RapidStatus::Ok);

    let mut short = vec![0.0; d - 1];
    let st = unsafe { rapid_solution_point(solution, short.as_mut_ptr(), d - 1) };
    assert_eq!(st, RapidStatus::BadArgument);
    assert!(last_error().contains("length"));

    let mut row = RapidTraceRow {
        t: 0,
        f_x: 0.0,
        f_theta_x: 0.0,
        theta: 0.0,
        eta: 0.0,
        gamma: 0.0,
        elapsed_ns: 0,
    };
    let len = rapid_solution_trace_len(solution);
    let st = unsafe { rapid_solution_trace_row(solution, len, &mut row) };
    assert_eq!(st, RapidStatus::BadArgument);

    rapid_solution_free(solution);
    rapid_problem_free(problem);
}

#[test]
fn version_is_a_readable_c_string() {
    let v = unsafe { CStr::from_ptr(rapid_version()) }.to_str().unwrap();
    assert!(!v.is_empty());
    assert!(v.split('.').count() >= 2);
}
