#include "lcqp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lcqp/qp_solver.hpp"

namespace lcqp {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Solved: return "solved";
    case SolverStatus::MaxPenaltyReached: return "maxPenaltyReached";
    case SolverStatus::MaxIterationsReached: return "maxIterationsReached";
    case SolverStatus::SubproblemFailure: return "subproblemFailure";
  }
  return "unknown";
}

void ComplementarityHistory::push(double phi) {
  if (capacity_ <= 0) return;
  vals_.push_back(phi);
  while (static_cast<int>(vals_.size()) > capacity_) vals_.pop_front();
}

double ComplementarityHistory::max() const {
  double m = -kInf;
  for (double v : vals_) m = std::max(m, v);
  return m;
}

bool dynamic_penalty_triggered(double phi_new, const ComplementarityHistory& h,
                               double eta, double eps_phi) {
  if (h.capacity() <= 0 || h.empty()) return false;
  return phi_new > eps_phi && phi_new > eta * h.max();
}

double exact_step_length(const LcqpProblem& p, const PenaltyStructure& ps,
                         double rho, const Vector& x, const Vector& step) {
  const double slope = merit_gradient(p, ps, rho, x).dot(step);
  const double curv = step.dot(p.Q * step) + rho * step.dot(ps.C * step);
  if (curv > 0.0) return std::clamp(-slope / curv, 0.0, 1.0);
  // Concave (or flat) restriction: an endpoint wins. Subproblem steps always
  // descend, which selects 1 -- the published update rule -- but the
  // comparison stays correct for arbitrary directions.
  return slope + 0.5 * curv <= 0.0 ? 1.0 : 0.0;
}

double stationarity_residual(const LcqpProblem& p, const PenaltyStructure& ps,
                             double rho, const Vector& g_k, const Vector& x,
                             const StackedConstraints& s, const Vector& ydual) {
  Vector r = p.Q * x + rho * (ps.C * x) + g_k;
  r.noalias() -= s.rows.transpose() * ydual;
  return r.lpNorm<Eigen::Infinity>();
}

Vector perturb_gradient(const Vector& g, double scale, std::mt19937_64& rng) {
  if (scale <= 0.0) return g;
  const double delta = scale * (1.0 + g.lpNorm<Eigen::Infinity>());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector out = g;
  for (int i = 0; i < out.size(); ++i) out[i] += delta * u(rng);
  return out;
}

DualBlocks split_duals(const StackedConstraints& s, const Vector& stacked_dual) {
  DualBlocks d;
  d.y_L = stacked_dual.segment(s.l_offset(), s.n_c);
  d.y_R = stacked_dual.segment(s.r_offset(), s.n_c);
  d.y_A = stacked_dual.segment(s.a_offset(), s.n_A);
  d.y_x = stacked_dual.segment(s.box_offset(), s.n);
  return d;
}

void translate_duals(const LcqpProblem& p, double rho, const Vector& x,
                     DualBlocks& duals) {
  // The merit gradient carries rho * (L' (Rx - l_R) + R' (Lx - l_L)). At a
  // complementary point one factor per pair vanishes; the surviving term
  // belongs to the active side's row and is folded into that multiplier.
  for (int i = 0; i < p.n_c; ++i) {
    const double sl = p.L.row(i).dot(x) - p.ell_L[i];
    const double sr = p.R.row(i).dot(x) - p.ell_R[i];
    if (sl <= sr) {
      duals.y_L[i] -= rho * sr;
    } else {
      duals.y_R[i] -= rho * sl;
    }
  }
}

namespace {

struct BestIterate {
  double phi = kInf;
  double objective = kInf;
  double rho = 0.0;
  Vector x;
  Vector stacked_dual;

  void offer(double phi_v, double obj_v, double rho_v, const Vector& x_v,
             const Vector& dual_v) {
    const bool better =
        phi_v < phi * (1.0 - 1e-12) ||
        (phi_v <= phi * (1.0 + 1e-12) && obj_v < objective);
    if (x.size() == 0 || better) {
      phi = phi_v;
      objective = obj_v;
      rho = rho_v;
      x = x_v;
      stacked_dual = dual_v;
    }
  }
};

void log_iterate(std::ostream* os, int level, const IterateRecord& rec) {
  if (!os || level < 2) return;
  std::ostringstream line;
  line.setf(std::ios::scientific);
  line.precision(3);
  line << "  outer " << rec.outer << " inner " << rec.inner << "  qp "
       << rec.qp_iterations << "  rho " << rec.rho << "  alpha " << rec.alpha
       << "  phi " << rec.phi << "  merit " << rec.merit << "  sigma "
       << rec.stationarity;
  *os << line.str() << '\n';
}

void log_outer(std::ostream* os, int level, int outer, double rho, int inner,
               double phi, double sigma) {
  if (!os || level < 1) return;
  std::ostringstream line;
  line.setf(std::ios::scientific);
  line.precision(3);
  line << "outer " << outer << "  rho " << rho << "  inner " << inner
       << "  phi " << phi << "  sigma " << sigma;
  *os << line.str() << '\n';
}

}  // namespace

Solution solve(const LcqpProblem& problem, const SolverOptions& options) {
  const ValidationReport report = validate(problem);
  if (!report.ok()) {
    throw std::invalid_argument("invalid problem: " +
                                report.issues.front().message);
  }

  const StackedConstraints stacked = stack(problem);
  const PenaltyStructure ps = PenaltyStructure::build(problem);
  QpWorkspace ws(problem.Q, stacked);
  std::mt19937_64 rng(options.rng_seed);

  Solution sol;
  sol.iterations = 0;
  BestIterate best;

  const Vector guess =
      problem.initial_guess && problem.initial_guess->size() == problem.n
          ? *problem.initial_guess
          : Vector::Zero(problem.n);

  auto fail = [&](SolverStatus st, const std::string& msg, double rho) {
    sol.status = st;
    sol.message = msg;
    if (best.x.size() > 0) {
      sol.x = best.x;
      sol.phi = best.phi;
      sol.objective = best.objective;
      sol.penalty = rho;
      sol.duals = split_duals(stacked, best.stacked_dual);
      sol.stationarity = stationarity_residual(
          problem, ps, 0.0, problem.g, best.x, stacked, best.stacked_dual);
    }
    return sol;
  };

  Vector x;
  Vector last_dual = Vector::Zero(stacked.total_rows());

  if (options.solve_zero_penalty_first) {
    if (sol.iterations >= options.max_iterations)
      return fail(SolverStatus::MaxIterationsReached,
                  "iteration budget exhausted before the first subproblem",
                  0.0);
    const QpSolution qp = ws.solve(problem.g);
    ++sol.iterations;
    if (qp.status != QpStatus::Optimal)
      return fail(SolverStatus::SubproblemFailure,
                  qp.status == QpStatus::Infeasible
                      ? "relaxed constraint set is infeasible"
                      : "penalty-free subproblem did not converge",
                  0.0);
    x = qp.x;
    last_dual = qp.dual;
    const double phi0 = phi(problem, x);
    const double obj0 = problem.objective(x) + problem.objective_constant;
    best.offer(phi0, obj0, 0.0, x, last_dual);
    IterateRecord rec;
    rec.outer = 0;
    rec.inner = 0;
    rec.qp_iterations = qp.iterations;
    rec.rho = 0.0;
    rec.alpha = 1.0;
    rec.objective = obj0;
    rec.phi = phi0;
    rec.merit = obj0;
    rec.stationarity =
        stationarity_residual(problem, ps, 0.0, problem.g, x, stacked, qp.dual);
    rec.x = x;
    log_iterate(options.log, options.print_level, rec);
    if (options.observer) options.observer(rec);
  } else {
    auto feas = find_feasible_point(stacked, guess);
    if (!feas)
      return fail(SolverStatus::SubproblemFailure,
                  "relaxed constraint set is infeasible", 0.0);
    x = *feas;
    ws.set_start(x);
    best.offer(phi(problem, x), problem.objective(x) + problem.objective_constant,
               0.0, x, last_dual);
  }

  double rho = options.initial_penalty;
  for (int outer = 1;; ++outer, rho *= options.penalty_update_factor) {
    if (rho > options.max_penalty)
      return fail(SolverStatus::MaxPenaltyReached,
                  "penalty exceeded its cap before reaching complementarity",
                  rho);
    sol.outer_iterations = outer;

    const Vector g_base = problem.g + rho * ps.g_phi;
    const Vector g_k =
        perturb_gradient(g_base, options.perturbation_scale, rng);
    ComplementarityHistory history(options.n_dynamic);
    history.push(phi(problem, x));

    int inner = 0;
    double sigma = kInf;
    while (true) {
      if (sol.iterations >= options.max_iterations) {
        log_outer(options.log, options.print_level, outer, rho, inner,
                  phi(problem, x), sigma);
        return fail(SolverStatus::MaxIterationsReached,
                    "iteration budget exhausted", rho);
      }
      const Vector q = g_k + rho * (ps.C * x);
      const QpSolution qp = ws.solve(q);
      ++sol.iterations;
      ++inner;
      if (qp.status != QpStatus::Optimal)
        return fail(SolverStatus::SubproblemFailure,
                    qp.status == QpStatus::Infeasible
                        ? "subproblem reported infeasible rows"
                        : "subproblem iteration limit hit",
                    rho);
      const Vector step = qp.x - x;
      const double alpha = exact_step_length(problem, ps, rho, x, step);
      x += alpha * step;
      last_dual = qp.dual;

      const double phi_new = phi(problem, x);
      const double obj_new = problem.objective(x) + problem.objective_constant;
      sigma = stationarity_residual(problem, ps, rho, g_k, x, stacked, qp.dual);
      best.offer(phi_new, obj_new, rho, x, qp.dual);

      IterateRecord rec;
      rec.outer = outer;
      rec.inner = inner;
      rec.qp_iterations = qp.iterations;
      rec.rho = rho;
      rec.alpha = alpha;
      rec.objective = obj_new;
      rec.phi = phi_new;
      rec.merit = merit(problem, ps, rho, x);
      rec.stationarity = sigma;
      rec.x = x;
      rec.step = step;
      log_iterate(options.log, options.print_level, rec);
      if (options.observer) options.observer(rec);

      // Raising the penalty early skips the complementarity check below,
      // vacuously: the trigger requires phi above that tolerance.
      if (dynamic_penalty_triggered(phi_new, history, options.eta_dynamic,
                                    options.complementarity_tolerance))
        break;
      history.push(phi_new);
      if (sigma <= options.stationarity_tolerance) break;
    }

    const double phi_now = phi(problem, x);
    log_outer(options.log, options.print_level, outer, rho, inner, phi_now,
              sigma);
    if (phi_now <= options.complementarity_tolerance) {
      sol.status = SolverStatus::Solved;
      sol.x = x;
      sol.phi = phi_now;
      sol.objective = problem.objective(x) + problem.objective_constant;
      sol.penalty = rho;
      sol.duals = split_duals(stacked, last_dual);
      translate_duals(problem, rho, x, sol.duals);
      Vector folded(stacked.total_rows());
      folded << sol.duals.y_L, sol.duals.y_R, sol.duals.y_A, sol.duals.y_x;
      sol.stationarity = stationarity_residual(problem, ps, 0.0, problem.g, x,
                                               stacked, folded);
      sol.message = "converged to a complementary stationary point";
      if (options.log && options.print_level >= 1)
        *options.log << "solved: phi " << sol.phi << "  sigma "
                     << sol.stationarity << '\n';
      return sol;
    }
  }
}

}  // namespace lcqp
