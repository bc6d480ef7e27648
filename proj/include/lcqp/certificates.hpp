#pragma once

#include <cstdint>
#include <vector>

#include "lcqp/problem.hpp"
#include "lcqp/solver.hpp"
#include "lcqp/types.hpp"

namespace lcqp {

// Activity pattern of one complementarity pair at a point.
enum class PairActivity {
  LeftActive,   // left slack zero, right slack positive
  RightActive,  // right slack zero, left slack positive
  Biactive,     // both slacks zero
  Violated,     // both slacks positive: the pair is not complementary here
};

const char* to_string(PairActivity a);

// Classify every pair at x. A slack counts as zero within
// tol * (1 + |bound| + |row|_inf |x|_inf), so verdicts are scale-free.
std::vector<PairActivity> classify_active_sets(const LcqpProblem& p,
                                               const Vector& x,
                                               double tol = 1e-8);

// Result of checking a candidate point and multipliers against the
// first-order conditions of the complementarity-constrained problem. A
// singly-active pair fixes one side on its bound like an equality, so that
// side's multiplier is sign-free; a biactive pair needs both multipliers
// nonnegative; multipliers of inactive rows must vanish. General rows and
// variable bounds follow the usual convex rules (>= 0 on an active lower
// bound, <= 0 on an active upper bound, free on equalities).
struct StationarityReport {
  bool feasible = false;       // every stacked row within tolerance
  bool complementary = false;  // phi within tolerance
  bool gradient_ok = false;    // Qx + g == rows' * multipliers
  bool signs_ok = false;       // sign rules above
  double max_violation = kInf;
  double phi = kInf;
  double gradient_residual = kInf;
  double worst_sign_violation = 0.0;
  std::vector<PairActivity> activities;
  bool ok() const {
    return feasible && complementary && gradient_ok && signs_ok;
  }
};

StationarityReport verify_strong_stationarity(const LcqpProblem& p,
                                              const Vector& x,
                                              const DualBlocks& duals,
                                              double tol = 1e-6);

// Smallest penalty weight at which the merit function reproduces this
// stationary point:
//   1 + max(0, max_i -y_L_i / (right slack_i), max_i -y_R_i / (left slack_i)).
// A negative multiplier against a vanishing opposite slack yields infinity
// (no finite penalty recovers the point).
double penalty_bound(const LcqpProblem& p, const Vector& x,
                     const DualBlocks& duals);

// Outcome of the exhaustive branch search: x is the best point over all
// feasible branches (empty if none), objective includes objective_constant.
struct GlobalSearch {
  std::uint64_t branches = 0;  // 2^{n_c} subproblems enumerated
  std::uint64_t feasible_branches = 0;
  double objective = kInf;
  Vector x;
  std::uint64_t best_mask = 0;  // bit i set = right side of pair i pinned
  bool found() const { return x.size() > 0; }
};

// Global minimum by enumeration: each pair contributes two branches (pin the
// left row to its lower bound, or pin the right row), each branch is a convex
// QP over the remaining bounds. Exact but exponential; throws
// std::invalid_argument when n_c exceeds max_pairs or the problem fails
// validation.
GlobalSearch branch_enumerate(const LcqpProblem& p, int max_pairs = 20);

}  // namespace lcqp
