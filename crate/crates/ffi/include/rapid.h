#ifndef RAPID_H
#define RAPID_H

/* Generated by cbindgen from the rapid-ffi crate. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Update rule of the composite-objective solver.
 */
typedef enum {
  RapidRule_Fista = 0,
  RapidRule_Rapid1 = 1,
  RapidRule_Rapid2 = 2,
} RapidRule;

/**
 * Outcome of an API call. Anything but `Ok` leaves a human-readable
 * explanation in `rapid_last_error()`.
 */
typedef enum {
  RapidStatus_Ok = 0,
  /**
   * A required pointer argument was null.
   */
  RapidStatus_NullArgument = 1,
  /**
   * Rejected input: shapes, labels, ranges, or an out-of-bounds index.
   */
  RapidStatus_BadArgument = 2,
  /**
   * The computation itself failed: divergence, step underflow, or a
   * projection that could not reach feasibility.
   */
  RapidStatus_NumericalFailure = 3,
  /**
   * An internal invariant broke; the library state is still sound.
   */
  RapidStatus_Panic = 4,
} RapidStatus;

/**
 * Update rule of the SVM dual solver.
 */
typedef enum {
  RapidSvmRule_Apg = 0,
  RapidSvmRule_SvmRapid1 = 1,
  RapidSvmRule_SvmRapid2 = 2,
} RapidSvmRule;

/**
 * A composite regression problem (opaque).
 */
typedef struct RapidProblem RapidProblem;

/**
 * A finished solve: final point, trace, and diagnostics (opaque).
 */
typedef struct RapidSolution RapidSolution;

/**
 * A kernel SVM dual problem (opaque).
 */
typedef struct RapidSvmProblem RapidSvmProblem;

/**
 * A finished SVM solve (opaque).
 */
typedef struct RapidSvmSolution RapidSvmSolution;

/**
 * One recorded iteration of a solve.
 */
typedef struct {
  uint64_t t;
  double f_x;
  double f_theta_x;
  double theta;
  double eta;
  double gamma;
  uint64_t elapsed_ns;
} RapidTraceRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *rapid_version(void);

/**
 * Message from the most recent failing call on this thread. The pointer
 * stays valid until the next failing call on the same thread. Never null;
 * empty when no error has been recorded.
 */
const char *rapid_last_error(void);

/**
 * Least squares with an l1 penalty. `a` is `n x d` row-major, `y` has `n`
 * entries, `lambda` is the penalty weight. On success writes a handle to
 * `*out`; release it with `rapid_problem_free`.
 *
 * # Safety
 * `a` and `y` must point to buffers of the stated sizes.
 */
RapidStatus rapid_problem_lasso(size_t n,
                                size_t d,
                                const double *a,
                                const double *y,
                                double lambda,
                                RapidProblem **out);

/**
 * Least squares with a group l2 penalty over contiguous groups of
 * `group_size` coordinates (the last group may be shorter).
 *
 * # Safety
 * `a` and `y` must point to buffers of the stated sizes.
 */
RapidStatus rapid_problem_group_lasso(size_t n,
                                      size_t d,
                                      const double *a,
                                      const double *y,
                                      double lambda,
                                      size_t group_size,
                                      RapidProblem **out);

/**
 * Multitask least squares with a trace-norm penalty. `y` is `n x m`
 * row-major; the unknowns form a `d x m` matrix flattened column by column
 * in the solution vector.
 *
 * # Safety
 * `a` and `y` must point to buffers of the stated sizes.
 */
RapidStatus rapid_problem_trace_norm(size_t n,
                                     size_t d,
                                     size_t m,
                                     const double *a,
                                     const double *y,
                                     double lambda,
                                     RapidProblem **out);

/**
 * Number of unknowns of the flattened problem; 0 for a null handle.
 */
size_t rapid_problem_dim(const RapidProblem *p);

/**
 * Gradient Lipschitz constant the solver uses for its fixed step.
 */
double rapid_problem_lipschitz(const RapidProblem *p);

/**
 * Composite objective value at a caller-supplied point of length
 * `rapid_problem_dim(p)`.
 *
 * # Safety
 * `x` must point to `len` doubles.
 */
RapidStatus rapid_problem_objective(const RapidProblem *p,
                                    const double *x,
                                    size_t len,
                                    double *value);

void rapid_problem_free(RapidProblem *p);

/**
 * Runs the chosen rule. `x0` may be null for the zero start; otherwise it
 * must hold `rapid_problem_dim(p)` doubles. On success writes a handle to
 * `*out`; release it with `rapid_solution_free`.
 *
 * # Safety
 * `x0`, when non-null, must point to `rapid_problem_dim(p)` doubles.
 */
RapidStatus rapid_solve(const RapidProblem *p,
                        RapidRule rule,
                        size_t max_iter,
                        double rel_tol,
                        const double *x0,
                        RapidSolution **out);

/**
 * True when the relative-change stopping rule fired before the iteration
 * budget ran out.
 */
bool rapid_solution_converged(const RapidSolution *r);

size_t rapid_solution_iterations(const RapidSolution *r);

/**
 * Objective value at the returned point.
 */
double rapid_solution_objective(const RapidSolution *r);

size_t rapid_solution_dim(const RapidSolution *r);

/**
 * Copies the solution point into `buf`, which must hold exactly
 * `rapid_solution_dim(r)` doubles.
 *
 * # Safety
 * `buf` must point to `len` writable doubles.
 */
RapidStatus rapid_solution_point(const RapidSolution *r, double *buf, size_t len);

size_t rapid_solution_trace_len(const RapidSolution *r);

/**
 * Copies trace record `idx` (0-based) into `*row`.
 *
 * # Safety
 * `row` must point to a writable `RapidTraceRow`.
 */
RapidStatus rapid_solution_trace_row(const RapidSolution *r, size_t idx, RapidTraceRow *row);

void rapid_solution_free(RapidSolution *r);

/**
 * Builds the dual of a linear-kernel SVM from `n` points with `d` features
 * (row-major `x`) and labels `y` in {-1, +1}, box bound `c`. Release the
 * handle with `rapid_svm_problem_free`.
 *
 * # Safety
 * `x` must point to `n * d` doubles and `y` to `n` doubles.
 */
RapidStatus rapid_svm_linear(size_t n,
                             size_t d,
                             const double *x,
                             const double *y,
                             double c,
                             RapidSvmProblem **out);

/**
 * Number of training points; 0 for a null handle.
 */
size_t rapid_svm_problem_len(const RapidSvmProblem *p);

void rapid_svm_problem_free(RapidSvmProblem *p);

/**
 * Solves the dual with the chosen rule. On success writes a handle to
 * `*out`; release it with `rapid_svm_solution_free`.
 *
 * # Safety
 * `out` must point to a writable handle slot.
 */
RapidStatus rapid_svm_solve(const RapidSvmProblem *p,
                            RapidSvmRule rule,
                            size_t max_iter,
                            double rel_tol,
                            RapidSvmSolution **out);

/**
 * Dual objective at the returned multipliers.
 */
double rapid_svm_solution_objective(const RapidSvmSolution *r);

size_t rapid_svm_solution_iterations(const RapidSvmSolution *r);

bool rapid_svm_solution_converged(const RapidSvmSolution *r);

size_t rapid_svm_solution_len(const RapidSvmSolution *r);

/**
 * Copies the dual multipliers into `buf`, which must hold exactly
 * `rapid_svm_solution_len(r)` doubles.
 *
 * # Safety
 * `buf` must point to `len` writable doubles.
 */
RapidStatus rapid_svm_solution_alpha(const RapidSvmSolution *r, double *buf, size_t len);

void rapid_svm_solution_free(RapidSvmSolution *r);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RAPID_H */
