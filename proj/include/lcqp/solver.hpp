#pragma once

#include <deque>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>

#include "lcqp/problem.hpp"

namespace lcqp {

enum class SolverStatus {
  Solved,
  MaxPenaltyReached,
  MaxIterationsReached,
  SubproblemFailure,
};

const char* to_string(SolverStatus s);

// One inner iterate, as handed to the observer callback and the log.
struct IterateRecord {
  int outer = 0;        // penalty loop index (0 = zero-penalty warm-up)
  int inner = 0;        // iteration within the current penalty loop
  int qp_iterations = 0;
  double rho = 0.0;
  double alpha = 1.0;
  double objective = 0.0;
  double phi = 0.0;     // complementarity residual <Lx-l, Rx-l>
  double merit = 0.0;
  double stationarity = kInf;
  Vector x;
  // Direction handed to the line search (x = previous x + alpha * step);
  // empty on the warm-up record, which involves no line search.
  Vector step;
};

struct SolverOptions {
  // Convergence of the inner sequential loop, measured on the penalized
  // gradient against the subproblem multipliers (infinity norm).
  double stationarity_tolerance = 1e6 * kEps;
  // A point counts as complementary when phi drops below this.
  double complementarity_tolerance = 1e3 * kEps;
  double initial_penalty = 1e-2;
  double penalty_update_factor = 2.0;
  // Start from the penalty-free relaxation instead of projecting the guess.
  bool solve_zero_penalty_first = true;
  // Budget counted in QP subproblem solves, across all penalty loops.
  int max_iterations = 1000;
  double max_penalty = 1e4;
  int print_level = 2;  // 0 silent, 1 outer loop lines, 2 every iterate
  // Penalty is raised early when phi stagnates relative to the largest of
  // the last n_dynamic values; 0 turns the heuristic off.
  int n_dynamic = 3;
  double eta_dynamic = 0.9;
  // Gradient noise injected once per penalty loop to break the symmetry of
  // saddle points; scaled by (1 + |g_k|_inf). 0 disables.
  double perturbation_scale = 1e2 * kEps;
  std::uint64_t rng_seed = 42;
  std::ostream* log = nullptr;  // where print_level output goes; null = off
  std::function<void(const IterateRecord&)> observer;
};

// Multipliers split by origin. After a successful solve these certify
// stationarity of the original problem (penalty terms folded in).
struct DualBlocks {
  Vector y_L;  // one per complementarity pair, left rows
  Vector y_R;  // one per complementarity pair, right rows
  Vector y_A;  // general linear rows
  Vector y_x;  // variable bounds
};

struct Solution {
  SolverStatus status = SolverStatus::SubproblemFailure;
  Vector x;
  DualBlocks duals;
  double objective = kInf;  // includes the problem's objective_constant
  double phi = kInf;
  // KKT residual of the original problem under the returned multipliers.
  double stationarity = kInf;
  double penalty = 0.0;       // rho at termination
  int outer_iterations = 0;
  int iterations = 0;         // QP solves consumed
  std::string message;
};

Solution solve(const LcqpProblem& problem, const SolverOptions& options = {});

// --- pieces of the algorithm, exposed for direct testing ---

// Minimizer over [0,1] of the merit function along x + alpha * step. Closed
// form: the 1-D restriction is a quadratic; positive curvature takes the
// clamped vertex, otherwise the better endpoint. Steps produced by the
// convex subproblem always descend, so the concave branch returns 1 there.
double exact_step_length(const LcqpProblem& p, const PenaltyStructure& ps,
                         double rho, const Vector& x, const Vector& step);

// Sliding window of recent phi values, seeded with the value at penalty-loop
// entry. Oldest entries fall out once `capacity` is exceeded.
class ComplementarityHistory {
 public:
  explicit ComplementarityHistory(int capacity) : capacity_(capacity) {}
  void push(double phi);
  bool empty() const { return vals_.empty(); }
  double max() const;
  int capacity() const { return capacity_; }

 private:
  int capacity_;
  std::deque<double> vals_;
};

// True when phi_new still exceeds eps_phi and fails to undercut eta times
// the best of the recent history: the loop is grinding without progress and
// the penalty should be raised now.
bool dynamic_penalty_triggered(double phi_new, const ComplementarityHistory& h,
                               double eta, double eps_phi);

// Penalized stationarity residual |(Q + rho C) x + g_k - rows' ydual|_inf,
// where g_k already contains the rho * g_phi term (and any perturbation).
double stationarity_residual(const LcqpProblem& p, const PenaltyStructure& ps,
                             double rho, const Vector& g_k, const Vector& x,
                             const StackedConstraints& s, const Vector& ydual);

// Additive uniform noise of magnitude scale * (1 + |g|_inf) per component.
Vector perturb_gradient(const Vector& g, double scale, std::mt19937_64& rng);

// Map subproblem multipliers at a complementary point to multipliers of the
// original problem: on each pair the side closer to its bound absorbs the
// penalty gradient term rho * (other side's slack).
DualBlocks split_duals(const StackedConstraints& s, const Vector& stacked_dual);
void translate_duals(const LcqpProblem& p, double rho, const Vector& x,
                     DualBlocks& duals);

}  // namespace lcqp
