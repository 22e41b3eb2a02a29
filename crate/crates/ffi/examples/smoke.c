/* Minimal consumer of the C API: builds a small l1 problem, solves it, and
 * reads the solution back. Exits nonzero on the first unexpected status.
 *
 * Build against the generated header and the static library, e.g.
 *   cc smoke.c -I../include ../../target/debug/librapid_ffi.a -lm -lpthread -ldl
 */

#include <stdio.h>
#include <stdlib.h>

#include "rapid.h"

#define CHECK(st)                                                         \
    do {                                                                  \
        RapidStatus s_ = (st);                                            \
        if (s_ != RapidStatus_Ok) {                                       \
            fprintf(stderr, "status %d: %s\n", (int)s_, rapid_last_error()); \
            return 1;                                                     \
        }                                                                 \
    } while (0)

int main(void) {
    const size_t n = 8, d = 3;
    /* y responds to the first column only; the penalty should zero the rest */
    double a[8 * 3] = {
        1.0, 0.1, -0.2, -1.0, 0.0, 0.3,  1.2, -0.1, 0.1, -0.9, 0.2,  0.0,
        0.8, 0.0, -0.1, -1.1, 0.1, 0.2,  1.0, 0.3,  0.0, -1.0, -0.2, 0.1,
    };
    double y[8] = {1.0, -1.0, 1.2, -0.9, 0.8, -1.1, 1.0, -1.0};

    printf("rapid %s\n", rapid_version());

    RapidProblem *problem = NULL;
    CHECK(rapid_problem_lasso(n, d, a, y, 0.1, &problem));
    if (rapid_problem_dim(problem) != d) return 1;

    RapidSolution *solution = NULL;
    CHECK(rapid_solve(problem, RapidRule_Rapid2, 500, 1e-10, NULL, &solution));
    if (!rapid_solution_converged(solution)) return 1;

    double x[3];
    CHECK(rapid_solution_point(solution, x, d));
    printf("iterations=%zu objective=%.6f x0=%.4f\n",
           rapid_solution_iterations(solution),
           rapid_solution_objective(solution), x[0]);
    if (!(x[0] > 0.5)) return 1; /* the planted coefficient must survive */

    RapidTraceRow row;
    CHECK(rapid_solution_trace_row(solution, 0, &row));
    if (row.t != 1) return 1;

    rapid_solution_free(solution);
    rapid_problem_free(problem);
    return 0;
}
