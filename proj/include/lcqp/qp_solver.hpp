#pragma once

#include <Eigen/Cholesky>
#include <optional>
#include <vector>

#include "lcqp/problem.hpp"
#include "lcqp/types.hpp"

namespace lcqp {

struct QpOptions {
  // Absolute tolerance on primal feasibility and dual stationarity.
  double tolerance = 1e-10;
  // Iteration cap = factor * (n + number of stacked rows).
  int iteration_cap_factor = 10;
};

enum class QpStatus { Optimal, Infeasible, IterationLimit };

struct QpSolution {
  QpStatus status = QpStatus::Optimal;
  Vector x;
  // One multiplier per stacked row; >= 0 on lower-active rows, <= 0 on
  // upper-active rows, 0 on inactive rows, free on equality rows. Satisfies
  // Q x + q - rows' * dual = 0 at the reported solution.
  Vector dual;
  int iterations = 0;
  int working_set_changes = 0;
};

// Primal active-set solver for the box-row QP
//
//   min  1/2 x'Qx + q'x   s.t.  lower <= rows*x <= upper
//
// over a fixed Q (symmetric positive definite) and fixed stacked rows, with a
// varying linear term — the warm-start pattern of the outer penalty homotopy,
// where every subproblem shares its Hessian and constraints with the last.
//
// The Cholesky factor of Q is computed once in the constructor. Each working
// set W keeps the Cholesky factor of S = A_W Q^{-1} A_W', updated by rank-one
// grow/delete operations as rows enter and leave; KKT solves go through these
// cached factors and are finished with iterative refinement so that heavily
// scaled Hessians (e.g. tiny regularization entries) still meet `tolerance`.
//
// Rows whose bound magnitude is >= 1e20 are treated as absent. Candidate rows
// that are linearly dependent on the working set are skipped. Ties in the
// blocking-constraint ratio test break toward the smallest stacked row index.
class QpWorkspace {
 public:
  // Throws std::invalid_argument if Q is not positive definite.
  QpWorkspace(const Matrix& Q, StackedConstraints stacked, QpOptions opt = {});

  // Install a primal-feasible starting point and clear the working set.
  // Throws std::invalid_argument if x violates the rows by more than 1e-6.
  void set_start(const Vector& x);
  bool has_start() const { return started_; }

  // Solve for the given linear term. Starts from the previous solution when
  // one exists (the working set and its factorization persist); otherwise
  // bootstraps a feasible point internally and may report Infeasible.
  QpSolution solve(const Vector& q);

  int working_set_size() const { return static_cast<int>(ws_.size()); }
  const StackedConstraints& stacked() const { return stacked_; }

 private:
  struct Entry {
    int row;        // stacked row index
    int side;       // +1 lower bound active, -1 upper bound active
    bool equality;  // lower == upper: never dropped, dual sign free
  };

  // Solve  Q p - N lam = -a,  N' p = b  through the cached factors, then
  // refine against the full KKT residual.
  void kkt_solve(const Vector& a, const Vector& b, Vector& p, Vector& lam) const;
  void kkt_base(const Vector& a, const Vector& b, Vector& p, Vector& lam) const;
  bool grow(int row, int side);   // false if dependent on the working set
  void drop(int idx);

  int n_ = 0, m_rows_ = 0;
  QpOptions opt_;
  Matrix Q_;
  Eigen::LLT<Matrix> qchol_;
  StackedConstraints stacked_;
  Vector row_scale_;  // max(1, inf-norm of each stacked row)

  std::vector<Entry> ws_;
  Matrix N_;    // n x |W|: signed active normals (side * row), column-major
  Matrix QiN_;  // n x |W|: Q^{-1} N
  Matrix Ls_;   // |W| x |W| lower Cholesky factor of N' Q^{-1} N
  Vector bw_;   // signed active bounds

  Vector x_;
  bool started_ = false;
  std::vector<char> in_ws_;  // per stacked row
};

// Point in the relaxed set closest (elastically) to `seed`, or nullopt when
// the rows admit no point at all. One auxiliary QP over (x, theta) where
// theta in [0,1] scales each row's violation at the seed; self-starting at
// theta = 1.
std::optional<Vector> find_feasible_point(const StackedConstraints& stacked,
                                          const Vector& seed,
                                          double tol = 1e-10);

}  // namespace lcqp
