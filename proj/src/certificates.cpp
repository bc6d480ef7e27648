#include "lcqp/certificates.hpp"

#include <cmath>
#include <stdexcept>

#include "lcqp/qp_solver.hpp"

namespace lcqp {

const char* to_string(PairActivity a) {
  switch (a) {
    case PairActivity::LeftActive: return "left";
    case PairActivity::RightActive: return "right";
    case PairActivity::Biactive: return "biactive";
    case PairActivity::Violated: return "violated";
  }
  return "?";
}

std::vector<PairActivity> classify_active_sets(const LcqpProblem& p,
                                               const Vector& x, double tol) {
  const double xn = x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0;
  std::vector<PairActivity> out(static_cast<size_t>(p.n_c));
  for (int i = 0; i < p.n_c; ++i) {
    const double sl = p.L.row(i).dot(x) - p.ell_L(i);
    const double sr = p.R.row(i).dot(x) - p.ell_R(i);
    const double al =
        tol * (1.0 + std::abs(p.ell_L(i)) +
               p.L.row(i).lpNorm<Eigen::Infinity>() * xn);
    const double ar =
        tol * (1.0 + std::abs(p.ell_R(i)) +
               p.R.row(i).lpNorm<Eigen::Infinity>() * xn);
    const bool left = sl <= al;
    const bool right = sr <= ar;
    out[static_cast<size_t>(i)] =
        left && right ? PairActivity::Biactive
        : left        ? PairActivity::LeftActive
        : right       ? PairActivity::RightActive
                      : PairActivity::Violated;
  }
  return out;
}

namespace {

// Sign rule for one stacked row given which of its bounds x sits on.
// Returns the amount by which the multiplier breaks the rule (0 = clean).
double sign_violation(bool lower_active, bool upper_active, bool equality,
                      bool sign_free, double y) {
  if (equality || (lower_active && upper_active)) return 0.0;
  if (lower_active) return sign_free ? 0.0 : std::max(0.0, -y);
  if (upper_active) return std::max(0.0, y);
  return std::abs(y);  // inactive row: multiplier must vanish
}

struct RowCheck {
  bool lower_active = false;
  bool upper_active = false;
  bool equality = false;
};

RowCheck bound_activity(double val, double lo, double up, double atol) {
  RowCheck rc;
  rc.lower_active = !bound_absent(lo) && val - lo <= atol;
  rc.upper_active = !bound_absent(up) && up - val <= atol;
  rc.equality = !bound_absent(lo) && !bound_absent(up) && up - lo <= atol;
  return rc;
}

// Missing (empty) dual blocks count as zero multipliers.
Vector block_or_zero(const Vector& v, int want) {
  return v.size() == want ? v : Vector(Vector::Zero(want));
}

}  // namespace

StationarityReport verify_strong_stationarity(const LcqpProblem& p,
                                              const Vector& x,
                                              const DualBlocks& duals,
                                              double tol) {
  StationarityReport rep;
  const StackedConstraints s = stack(p);
  const double xn = x.size() ? x.lpNorm<Eigen::Infinity>() : 0.0;

  rep.max_violation = s.max_violation(x);
  rep.feasible = rep.max_violation <= tol * (1.0 + xn);

  rep.phi = phi(p, x);
  rep.complementary = rep.phi <= tol * (1.0 + xn);

  rep.activities = classify_active_sets(p, x, tol);

  const Vector yL = block_or_zero(duals.y_L, p.n_c);
  const Vector yR = block_or_zero(duals.y_R, p.n_c);
  const Vector yA = block_or_zero(duals.y_A, p.n_A);
  const Vector yx = block_or_zero(duals.y_x, p.n);

  Vector grad = p.Q * x + p.g;
  if (p.n_c > 0) grad -= p.L.transpose() * yL + p.R.transpose() * yR;
  if (p.n_A > 0) grad -= p.A.transpose() * yA;
  grad -= yx;
  rep.gradient_residual = grad.lpNorm<Eigen::Infinity>();
  const double gscale =
      1.0 + p.g.lpNorm<Eigen::Infinity>() + (p.Q * x).lpNorm<Eigen::Infinity>();
  rep.gradient_ok = rep.gradient_residual <= tol * gscale;

  double dual_scale = 1.0;
  for (const Vector* y : {&yL, &yR, &yA, &yx})
    if (y->size() > 0)
      dual_scale = std::max(dual_scale, y->lpNorm<Eigen::Infinity>());

  double worst = 0.0;
  for (int i = 0; i < p.n_c; ++i) {
    const PairActivity act = rep.activities[static_cast<size_t>(i)];
    const double lv = p.L.row(i).dot(x);
    const double rv = p.R.row(i).dot(x);
    const double al =
        tol * (1.0 + std::abs(p.ell_L(i)) +
               p.L.row(i).lpNorm<Eigen::Infinity>() * xn);
    const double ar =
        tol * (1.0 + std::abs(p.ell_R(i)) +
               p.R.row(i).lpNorm<Eigen::Infinity>() * xn);
    RowCheck lrc = bound_activity(lv, p.ell_L(i), p.u_L(i), al);
    RowCheck rrc = bound_activity(rv, p.ell_R(i), p.u_R(i), ar);
    // The singly-active side of a pair acts as an equality: sign-free.
    const bool l_free = act == PairActivity::LeftActive && lrc.lower_active;
    const bool r_free = act == PairActivity::RightActive && rrc.lower_active;
    worst = std::max(worst, sign_violation(lrc.lower_active, lrc.upper_active,
                                           lrc.equality, l_free, yL(i)));
    worst = std::max(worst, sign_violation(rrc.lower_active, rrc.upper_active,
                                           rrc.equality, r_free, yR(i)));
  }
  for (int i = 0; i < p.n_A; ++i) {
    const double val = p.A.row(i).dot(x);
    const double atol =
        tol * (1.0 + std::max(std::abs(bound_absent(p.ell_A(i)) ? 0.0
                                                                : p.ell_A(i)),
                              std::abs(bound_absent(p.u_A(i)) ? 0.0
                                                              : p.u_A(i))) +
               p.A.row(i).lpNorm<Eigen::Infinity>() * xn);
    RowCheck rc = bound_activity(val, p.ell_A(i), p.u_A(i), atol);
    worst = std::max(worst, sign_violation(rc.lower_active, rc.upper_active,
                                           rc.equality, false, yA(i)));
  }
  for (int i = 0; i < p.n; ++i) {
    const double atol = tol * (1.0 + xn);
    RowCheck rc = bound_activity(x(i), p.ell_x(i), p.u_x(i), atol);
    worst = std::max(worst, sign_violation(rc.lower_active, rc.upper_active,
                                           rc.equality, false, yx(i)));
  }
  rep.worst_sign_violation = worst;
  rep.signs_ok = worst <= tol * dual_scale;
  return rep;
}

double penalty_bound(const LcqpProblem& p, const Vector& x,
                     const DualBlocks& duals) {
  const Vector yL = block_or_zero(duals.y_L, p.n_c);
  const Vector yR = block_or_zero(duals.y_R, p.n_c);
  double worst = 0.0;
  for (int i = 0; i < p.n_c; ++i) {
    const double sl = p.L.row(i).dot(x) - p.ell_L(i);
    const double sr = p.R.row(i).dot(x) - p.ell_R(i);
    if (yL(i) < 0.0) {
      if (sr <= 0.0) return kInf;
      worst = std::max(worst, -yL(i) / sr);
    }
    if (yR(i) < 0.0) {
      if (sl <= 0.0) return kInf;
      worst = std::max(worst, -yR(i) / sl);
    }
  }
  return 1.0 + worst;
}

GlobalSearch branch_enumerate(const LcqpProblem& p, int max_pairs) {
  const ValidationReport rep = validate(p);
  if (!rep.ok())
    throw std::invalid_argument("invalid problem: " +
                                rep.issues.front().message);
  if (p.n_c > max_pairs)
    throw std::invalid_argument(
        "branch enumeration over " + std::to_string(p.n_c) +
        " pairs exceeds the cap of " + std::to_string(max_pairs));

  const StackedConstraints base = stack(p);
  GlobalSearch out;
  out.branches = std::uint64_t{1} << p.n_c;
  for (std::uint64_t mask = 0; mask < out.branches; ++mask) {
    StackedConstraints s = base;
    for (int i = 0; i < p.n_c; ++i) {
      const int row = (mask >> i) & 1 ? s.r_offset() + i : s.l_offset() + i;
      const double pin = (mask >> i) & 1 ? p.ell_R(i) : p.ell_L(i);
      s.lower(row) = pin;
      s.upper(row) = pin;
    }
    QpWorkspace ws(p.Q, s);
    const QpSolution qp = ws.solve(p.g);
    if (qp.status != QpStatus::Optimal) continue;
    ++out.feasible_branches;
    const double obj = p.objective(qp.x) + p.objective_constant;
    if (obj < out.objective) {
      out.objective = obj;
      out.x = qp.x;
      out.best_mask = mask;
    }
  }
  return out;
}

}  // namespace lcqp
