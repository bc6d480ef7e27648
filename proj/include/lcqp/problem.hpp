#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcqp/types.hpp"

namespace lcqp {

// Quadratic program with linear complementarity constraints, stated over
// x in R^n:
//
//   min   1/2 x'Qx + g'x
//   s.t.  (Lx - ell_L)' (Rx - ell_R) = 0        (n_c complementarity pairs)
//         ell_L <= Lx <= u_L,  ell_R <= Rx <= u_R
//         ell_A <= Ax <= u_A                    (n_A general rows)
//         ell_x <= x  <= u_x
//
// Q must be symmetric positive definite; ell_L and ell_R must be finite so
// the complementarity products are bounded below on the relaxed set.
struct LcqpProblem {
  int n = 0;    // variables
  int n_c = 0;  // complementarity pairs
  int n_A = 0;  // general linear rows

  Matrix Q;
  Vector g;

  Matrix L, R;
  Vector ell_L, u_L;
  Vector ell_R, u_R;

  Matrix A;
  Vector ell_A, u_A;

  Vector ell_x, u_x;

  // Constant dropped when a source objective was brought to quadratic form;
  // reporting only, the solver never sees it.
  double objective_constant = 0.0;

  std::optional<Vector> initial_guess;

  double objective(const Vector& x) const;
};

struct ValidationIssue {
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Structural and numerical checks: dimension consistency, symmetry of Q
// (1e-12 relative), positive definiteness of Q (Cholesky success — this is
// the on-demand definiteness check, solve() does not repeat it), finiteness
// of ell_L/ell_R, and ell <= u for every bound pair.
ValidationReport validate(const LcqpProblem& p);

enum class RowSource { ComplementarityL, ComplementarityR, General, Box };

// The relaxed feasible set as one stacked system  lower <= rows*x <= upper
// with block order [L; R; A; I]. `origin` maps each stacked row back to its
// source block and index there.
struct StackedConstraints {
  Matrix rows;
  Vector lower, upper;

  struct SourceRef {
    RowSource source;
    int index;
  };
  std::vector<SourceRef> origin;

  int n_c = 0, n_A = 0, n = 0;

  int l_offset() const { return 0; }
  int r_offset() const { return n_c; }
  int a_offset() const { return 2 * n_c; }
  int box_offset() const { return 2 * n_c + n_A; }
  int total_rows() const { return 2 * n_c + n_A + n; }

  // Membership in the relaxed set within an absolute tolerance per row.
  bool contains(const Vector& x, double tol) const;
  // Largest bound violation over all rows (0 when feasible).
  double max_violation(const Vector& x) const;
};

StackedConstraints stack(const LcqpProblem& p);

// Quadratic expansion of the complementarity residual
//   phi(x) = (Lx - ell_L)'(Rx - ell_R) = 1/2 x'Cx + g_phi'x + const_phi
// with C = L'R + R'L (symmetric), g_phi = -(R'ell_L + L'ell_R),
// const_phi = ell_L'ell_R.
struct PenaltyStructure {
  Matrix C;
  Vector g_phi;
  double const_phi = 0.0;

  static PenaltyStructure build(const LcqpProblem& p);
};

// Complementarity residual, evaluated through the factored form
// (Lx - ell_L)'(Rx - ell_R). Nonnegative on the relaxed set.
double phi(const LcqpProblem& p, const Vector& x);

// Exact-penalty merit  psi_rho(x) = 1/2 x'(Q + rho C)x + (g + rho g_phi)'x.
// Identity: psi_rho(x) = objective(x) + rho*(phi(x) - const_phi).
double merit(const LcqpProblem& p, const PenaltyStructure& ps, double rho,
             const Vector& x);

Vector merit_gradient(const LcqpProblem& p, const PenaltyStructure& ps,
                      double rho, const Vector& x);

}  // namespace lcqp
