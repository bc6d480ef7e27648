#ifndef LCQP_H
#define LCQP_H

/* C interface to the LCQP solver library.
 *
 * Conventions:
 *   - Handles are opaque; every create/load/gen call returns NULL on failure
 *     and each *_free accepts NULL.
 *   - Functions returning int yield LCQP_OK (0) or an LCQP_ERR_* code; the
 *     thread-local message behind lcqp_last_error() describes the failure.
 *   - Matrices cross the boundary as dense row-major arrays; vectors as
 *     plain arrays. Infinite bounds are IEEE infinities.
 *   - Distinct handles may be used concurrently from different threads;
 *     sharing one handle across threads requires external synchronization.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define LCQP_OK 0
#define LCQP_ERR_ARGUMENT 1   /* null pointer, bad size, unknown name */
#define LCQP_ERR_PARSE 2      /* malformed problem or solution file */
#define LCQP_ERR_VALIDATION 3 /* structurally sound but invalid problem */
#define LCQP_ERR_IO 4         /* file cannot be read or written */
#define LCQP_ERR_INTERNAL 5   /* unexpected failure; see lcqp_last_error */

/* Terminal solver states, in lcqp_solution_status. */
#define LCQP_STATUS_SOLVED 0
#define LCQP_STATUS_MAX_PENALTY 1
#define LCQP_STATUS_MAX_ITERATIONS 2
#define LCQP_STATUS_SUBPROBLEM_FAILURE 3

typedef struct lcqp_problem lcqp_problem;
typedef struct lcqp_options lcqp_options;
typedef struct lcqp_solution lcqp_solution;

/* Library version as "major.minor.patch". */
const char* lcqp_version(void);

/* Message of the most recent failure on this thread ("" if none). */
const char* lcqp_last_error(void);

/* ---- problems ---------------------------------------------------------- */

/* Empty problem with n variables, n_c complementarity pairs, n_A linear
 * rows. All blocks start zero-sized/zero-filled with free bounds; fill them
 * with the setters below. */
lcqp_problem* lcqp_problem_create(int n, int n_c, int n_A);
void lcqp_problem_free(lcqp_problem* p);

lcqp_problem* lcqp_problem_load(const char* path);
int lcqp_problem_save(const lcqp_problem* p, const char* path);

/* LCQP_OK when the problem is well posed (symmetric positive definite Q,
 * consistent shapes, finite complementarity lower bounds, ordered bound
 * pairs); LCQP_ERR_VALIDATION with the issue list in lcqp_last_error
 * otherwise. */
int lcqp_problem_validate(const lcqp_problem* p);

int lcqp_problem_n(const lcqp_problem* p);
int lcqp_problem_nc(const lcqp_problem* p);
int lcqp_problem_na(const lcqp_problem* p);
double lcqp_problem_objective_constant(const lcqp_problem* p);

/* Q is n*n row-major, g has n entries; constant is added to reported
 * objective values only. */
int lcqp_problem_set_objective(lcqp_problem* p, const double* Q,
                               const double* g, double constant);

/* L, R are n_c*n row-major; ell_* mandatory with n_c entries; u_L, u_R may
 * be NULL for +infinity. */
int lcqp_problem_set_complementarity(lcqp_problem* p, const double* L,
                                     const double* ell_L, const double* u_L,
                                     const double* R, const double* ell_R,
                                     const double* u_R);

/* A is n_A*n row-major; NULL bounds mean the full line. */
int lcqp_problem_set_linear(lcqp_problem* p, const double* A,
                            const double* ell_A, const double* u_A);

/* NULL bounds mean the full line. */
int lcqp_problem_set_box(lcqp_problem* p, const double* ell_x,
                         const double* u_x);

/* x0 has n entries; NULL removes the guess. */
int lcqp_problem_set_initial_guess(lcqp_problem* p, const double* x0);

/* Objective value 1/2 x'Qx + g'x plus the stored constant. */
double lcqp_problem_eval_objective(const lcqp_problem* p, const double* x);

/* Complementarity residual (Lx - ell_L)'(Rx - ell_R). */
double lcqp_problem_eval_phi(const lcqp_problem* p, const double* x);

/* Largest bound violation over all constraint rows and variable bounds
 * (0 when x is feasible for the relaxed set). */
double lcqp_problem_eval_violation(const lcqp_problem* p, const double* x);

/* ---- benchmark generators ---------------------------------------------- */

lcqp_problem* lcqp_gen_toy(void);
lcqp_problem* lcqp_gen_ivocp(int N, double x0_guess);
lcqp_problem* lcqp_gen_masses(int s, int N, double T);
lcqp_problem* lcqp_gen_intqp(int bits, double target);

/* ---- options ------------------------------------------------------------ */

/* Fresh handle holding the documented defaults. */
lcqp_options* lcqp_options_create(void);
void lcqp_options_free(lcqp_options* o);

/* Set one option by name. Boolean options take 0/1, integer options are
 * range-checked and truncated. Names (matching the CLI flags):
 *   stat-tol comp-tol rho0 beta zero-penalty-first max-iter max-penalty
 *   print-level n-dynamic eta-dynamic perturb-scale seed
 * Iterate output at print-level >= 1 goes to stderr. */
int lcqp_options_set(lcqp_options* o, const char* name, double value);

/* Current value of an option by the same names (NaN on unknown name). */
double lcqp_options_get(const lcqp_options* o, const char* name);

/* ---- solving ------------------------------------------------------------ */

/* Run the penalty homotopy. options == NULL means defaults. Returns a
 * solution handle for every terminal status; NULL only on argument or
 * validation errors. */
lcqp_solution* lcqp_solve(const lcqp_problem* p, const lcqp_options* o);
void lcqp_solution_free(lcqp_solution* s);

int lcqp_solution_status(const lcqp_solution* s);
const char* lcqp_solution_status_name(const lcqp_solution* s);
const char* lcqp_solution_message(const lcqp_solution* s);
double lcqp_solution_objective(const lcqp_solution* s); /* constant included */
double lcqp_solution_phi(const lcqp_solution* s);
double lcqp_solution_stationarity(const lcqp_solution* s);
double lcqp_solution_penalty(const lcqp_solution* s); /* rho at termination */
int lcqp_solution_outer_iterations(const lcqp_solution* s);
int lcqp_solution_iterations(const lcqp_solution* s); /* QP solves used */

/* Copy the point into x (n entries). */
int lcqp_solution_get_x(const lcqp_solution* s, double* x);

/* Copy any subset of the dual blocks; pass NULL to skip one. Sizes:
 * y_L, y_R: n_c; y_A: n_A; y_x: n. */
int lcqp_solution_get_duals(const lcqp_solution* s, double* y_L, double* y_R,
                            double* y_A, double* y_x);

/* Write point and duals as a solution file. */
int lcqp_solution_save(const lcqp_solution* s, const char* path);

/* Read a solution file written for a problem with the given dimensions.
 * x gets n entries. The dual buffers are filled only when the file carries
 * duals; *has_duals reports which case occurred. Dual buffers may be NULL
 * when has_duals comes back 0, otherwise all four are required. */
int lcqp_solution_file_load(const char* path, int n, int n_c, int n_A,
                            double* x, double* y_L, double* y_R, double* y_A,
                            double* y_x, int* has_duals);

/* ---- certificates and global oracle ------------------------------------- */

typedef struct lcqp_verify_report {
  int feasible;      /* every constraint row within tolerance */
  int complementary; /* phi within tolerance */
  int gradient_ok;   /* objective gradient matches the multipliers */
  int signs_ok;      /* multiplier sign rules hold */
  double max_violation;
  double phi;
  double gradient_residual;
  double worst_sign_violation;
} lcqp_verify_report;

/* First-order certificate check of (x, duals) on p. All four dual blocks
 * are mandatory here. tol <= 0 selects the default 1e-6. */
int lcqp_verify(const lcqp_problem* p, const double* x, const double* y_L,
                const double* y_R, const double* y_A, const double* y_x,
                double tol, lcqp_verify_report* out);

/* Smallest penalty weight whose merit function reproduces the certified
 * point; may be +infinity. Returns 0 on argument errors. */
double lcqp_penalty_bound(const lcqp_problem* p, const double* x,
                          const double* y_L, const double* y_R);

/* Exhaustive 2^{n_c} branch search. Fails with LCQP_ERR_ARGUMENT when n_c
 * exceeds max_pairs (max_pairs <= 0 selects the default cap of 20) and with
 * LCQP_ERR_INTERNAL when no branch is feasible. Outputs may be NULL. */
int lcqp_branch_enumerate(const lcqp_problem* p, int max_pairs, double* x,
                          double* objective, unsigned long long* branches,
                          unsigned long long* feasible_branches);

/* ---- performance profiles ----------------------------------------------- */

/* seconds is n_problems*n_solvers row-major; nonpositive or non-finite
 * entries mean the run failed. ratios (same shape, may be NULL) receives
 * per-problem time ratios against the fastest success; fraction
 * (n_tau*n_solvers row-major) receives the share of problems solved within
 * factor tau[i]. */
int lcqp_performance_profile(const double* seconds, int n_problems,
                             int n_solvers, const double* tau, int n_tau,
                             double* ratios, double* fraction);

#ifdef __cplusplus
}
#endif

#endif /* LCQP_H */
