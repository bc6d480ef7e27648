#include "lcqp.h"

#include <cmath>
#include <cstring>
#include <iostream>
#include <limits>
#include <new>
#include <string>

#include "lcqp/benchmarks.hpp"
#include "lcqp/certificates.hpp"
#include "lcqp/problem.hpp"
#include "lcqp/problem_io.hpp"
#include "lcqp/solver.hpp"

struct lcqp_problem {
  lcqp::LcqpProblem p;
};

struct lcqp_options {
  lcqp::SolverOptions o;
};

struct lcqp_solution {
  lcqp::Solution s;
  int n = 0, n_c = 0, n_A = 0;
};

namespace {

thread_local std::string g_error;

void set_error(const std::string& msg) { g_error = msg; }

int fail(int code, const std::string& msg) {
  set_error(msg);
  return code;
}

// Uniform exception funnel: every entry point body runs inside call().
template <typename F>
int call(F&& f) {
  try {
    return f();
  } catch (const lcqp::ParseError& e) {
    return fail(LCQP_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LCQP_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(LCQP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(LCQP_ERR_INTERNAL, "unknown failure");
  }
}

template <typename F>
lcqp_problem* make_problem(F&& gen) {
  lcqp_problem* h = nullptr;
  call([&] {
    h = new lcqp_problem{gen()};
    return LCQP_OK;
  });
  return h;
}

lcqp::Vector to_vector(const double* data, int size) {
  return Eigen::Map<const lcqp::Vector>(data, size);
}

lcqp::Matrix to_matrix(const double* data, int rows, int cols) {
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(data, rows, cols);
}

std::string join_issues(const lcqp::ValidationReport& rep) {
  std::string msg = "validation failed:";
  for (const auto& issue : rep.issues) msg += "\n  - " + issue.message;
  return msg;
}

}  // namespace

extern "C" {

const char* lcqp_version(void) { return LCQP_VERSION_STRING; }

const char* lcqp_last_error(void) { return g_error.c_str(); }

/* ---- problems ---------------------------------------------------------- */

lcqp_problem* lcqp_problem_create(int n, int n_c, int n_A) {
  if (n < 1 || n_c < 0 || n_A < 0) {
    set_error("problem dimensions must satisfy n >= 1, n_c >= 0, n_A >= 0");
    return nullptr;
  }
  return make_problem([&] {
    lcqp::LcqpProblem p;
    p.n = n;
    p.n_c = n_c;
    p.n_A = n_A;
    p.Q = lcqp::Matrix::Zero(n, n);
    p.g = lcqp::Vector::Zero(n);
    p.L = lcqp::Matrix::Zero(n_c, n);
    p.R = lcqp::Matrix::Zero(n_c, n);
    p.ell_L = lcqp::Vector::Zero(n_c);
    p.ell_R = lcqp::Vector::Zero(n_c);
    p.u_L = lcqp::Vector::Constant(n_c, lcqp::kInf);
    p.u_R = lcqp::Vector::Constant(n_c, lcqp::kInf);
    p.A = lcqp::Matrix::Zero(n_A, n);
    p.ell_A = lcqp::Vector::Constant(n_A, -lcqp::kInf);
    p.u_A = lcqp::Vector::Constant(n_A, lcqp::kInf);
    p.ell_x = lcqp::Vector::Constant(n, -lcqp::kInf);
    p.u_x = lcqp::Vector::Constant(n, lcqp::kInf);
    return p;
  });
}

void lcqp_problem_free(lcqp_problem* p) { delete p; }

lcqp_problem* lcqp_problem_load(const char* path) {
  if (!path) {
    set_error("path is null");
    return nullptr;
  }
  return make_problem([&] { return lcqp::load_problem(path); });
}

int lcqp_problem_save(const lcqp_problem* p, const char* path) {
  if (!p || !path) return fail(LCQP_ERR_ARGUMENT, "null argument");
  return call([&] {
    try {
      lcqp::save_problem(path, p->p);
    } catch (const std::runtime_error& e) {
      return fail(LCQP_ERR_IO, e.what());
    }
    return LCQP_OK;
  });
}

int lcqp_problem_validate(const lcqp_problem* p) {
  if (!p) return fail(LCQP_ERR_ARGUMENT, "problem is null");
  return call([&] {
    const lcqp::ValidationReport rep = lcqp::validate(p->p);
    if (!rep.ok()) return fail(LCQP_ERR_VALIDATION, join_issues(rep));
    return LCQP_OK;
  });
}

int lcqp_problem_n(const lcqp_problem* p) { return p ? p->p.n : 0; }
int lcqp_problem_nc(const lcqp_problem* p) { return p ? p->p.n_c : 0; }
int lcqp_problem_na(const lcqp_problem* p) { return p ? p->p.n_A : 0; }

double lcqp_problem_objective_constant(const lcqp_problem* p) {
  return p ? p->p.objective_constant : 0.0;
}

int lcqp_problem_set_objective(lcqp_problem* p, const double* Q,
                               const double* g, double constant) {
  if (!p || !Q || !g) return fail(LCQP_ERR_ARGUMENT, "null argument");
  return call([&] {
    p->p.Q = to_matrix(Q, p->p.n, p->p.n);
    p->p.g = to_vector(g, p->p.n);
    p->p.objective_constant = constant;
    return LCQP_OK;
  });
}

int lcqp_problem_set_complementarity(lcqp_problem* p, const double* L,
                                     const double* ell_L, const double* u_L,
                                     const double* R, const double* ell_R,
                                     const double* u_R) {
  if (!p || !L || !ell_L || !R || !ell_R)
    return fail(LCQP_ERR_ARGUMENT, "null argument");
  return call([&] {
    const int m = p->p.n_c;
    p->p.L = to_matrix(L, m, p->p.n);
    p->p.R = to_matrix(R, m, p->p.n);
    p->p.ell_L = to_vector(ell_L, m);
    p->p.ell_R = to_vector(ell_R, m);
    p->p.u_L = u_L ? to_vector(u_L, m) : lcqp::Vector::Constant(m, lcqp::kInf);
    p->p.u_R = u_R ? to_vector(u_R, m) : lcqp::Vector::Constant(m, lcqp::kInf);
    return LCQP_OK;
  });
}

int lcqp_problem_set_linear(lcqp_problem* p, const double* A,
                            const double* ell_A, const double* u_A) {
  if (!p || !A) return fail(LCQP_ERR_ARGUMENT, "null argument");
  return call([&] {
    const int m = p->p.n_A;
    p->p.A = to_matrix(A, m, p->p.n);
    p->p.ell_A =
        ell_A ? to_vector(ell_A, m) : lcqp::Vector::Constant(m, -lcqp::kInf);
    p->p.u_A =
        u_A ? to_vector(u_A, m) : lcqp::Vector::Constant(m, lcqp::kInf);
    return LCQP_OK;
  });
}

int lcqp_problem_set_box(lcqp_problem* p, const double* ell_x,
                         const double* u_x) {
  if (!p) return fail(LCQP_ERR_ARGUMENT, "problem is null");
  return call([&] {
    const int n = p->p.n;
    p->p.ell_x =
        ell_x ? to_vector(ell_x, n) : lcqp::Vector::Constant(n, -lcqp::kInf);
    p->p.u_x =
        u_x ? to_vector(u_x, n) : lcqp::Vector::Constant(n, lcqp::kInf);
    return LCQP_OK;
  });
}

int lcqp_problem_set_initial_guess(lcqp_problem* p, const double* x0) {
  if (!p) return fail(LCQP_ERR_ARGUMENT, "problem is null");
  return call([&] {
    if (x0) p->p.initial_guess = to_vector(x0, p->p.n);
    else p->p.initial_guess.reset();
    return LCQP_OK;
  });
}

double lcqp_problem_eval_objective(const lcqp_problem* p, const double* x) {
  if (!p || !x) {
    set_error("null argument");
    return std::numeric_limits<double>::quiet_NaN();
  }
  return p->p.objective(to_vector(x, p->p.n)) + p->p.objective_constant;
}

double lcqp_problem_eval_phi(const lcqp_problem* p, const double* x) {
  if (!p || !x) {
    set_error("null argument");
    return std::numeric_limits<double>::quiet_NaN();
  }
  return lcqp::phi(p->p, to_vector(x, p->p.n));
}

double lcqp_problem_eval_violation(const lcqp_problem* p, const double* x) {
  if (!p || !x) {
    set_error("null argument");
    return std::numeric_limits<double>::quiet_NaN();
  }
  return lcqp::stack(p->p).max_violation(to_vector(x, p->p.n));
}

/* ---- benchmark generators ---------------------------------------------- */

lcqp_problem* lcqp_gen_toy(void) {
  return make_problem([] { return lcqp::gen_toy(); });
}

lcqp_problem* lcqp_gen_ivocp(int N, double x0_guess) {
  return make_problem([&] { return lcqp::gen_ivocp({N, x0_guess}); });
}

lcqp_problem* lcqp_gen_masses(int s, int N, double T) {
  return make_problem([&] { return lcqp::gen_moving_masses({s, N, T, {}}); });
}

lcqp_problem* lcqp_gen_intqp(int bits, double target) {
  return make_problem([&] { return lcqp::gen_integer_qp({bits, target, true}); });
}

/* ---- options ------------------------------------------------------------ */

lcqp_options* lcqp_options_create(void) { return new (std::nothrow) lcqp_options; }

void lcqp_options_free(lcqp_options* o) { delete o; }

int lcqp_options_set(lcqp_options* o, const char* name, double value) {
  if (!o || !name) return fail(LCQP_ERR_ARGUMENT, "null argument");
  const std::string key = name;
  lcqp::SolverOptions& s = o->o;
  const auto bad = [&](const char* why) {
    return fail(LCQP_ERR_ARGUMENT, "option '" + key + "': " + why);
  };
  if (key == "stat-tol") {
    if (!(value > 0)) return bad("must be positive");
    s.stationarity_tolerance = value;
  } else if (key == "comp-tol") {
    if (!(value > 0)) return bad("must be positive");
    s.complementarity_tolerance = value;
  } else if (key == "rho0") {
    if (!(value > 0)) return bad("must be positive");
    s.initial_penalty = value;
  } else if (key == "beta") {
    if (!(value > 1)) return bad("must exceed 1");
    s.penalty_update_factor = value;
  } else if (key == "zero-penalty-first") {
    s.solve_zero_penalty_first = value != 0;
  } else if (key == "max-iter") {
    if (!(value >= 1)) return bad("must be at least 1");
    s.max_iterations = static_cast<int>(value);
  } else if (key == "max-penalty") {
    if (!(value > 0)) return bad("must be positive");
    s.max_penalty = value;
  } else if (key == "print-level") {
    if (value < 0 || value > 2) return bad("must be 0, 1 or 2");
    s.print_level = static_cast<int>(value);
  } else if (key == "n-dynamic") {
    if (value < 0) return bad("must be nonnegative");
    s.n_dynamic = static_cast<int>(value);
  } else if (key == "eta-dynamic") {
    if (!(value > 0 && value < 1)) return bad("must lie in (0, 1)");
    s.eta_dynamic = value;
  } else if (key == "perturb-scale") {
    if (value < 0) return bad("must be nonnegative");
    s.perturbation_scale = value;
  } else if (key == "seed") {
    s.rng_seed = static_cast<std::uint64_t>(value);
  } else {
    return bad(
        "unknown; valid names: stat-tol comp-tol rho0 beta "
        "zero-penalty-first max-iter max-penalty print-level n-dynamic "
        "eta-dynamic perturb-scale seed");
  }
  return LCQP_OK;
}

double lcqp_options_get(const lcqp_options* o, const char* name) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (!o || !name) {
    set_error("null argument");
    return nan;
  }
  const std::string key = name;
  const lcqp::SolverOptions& s = o->o;
  if (key == "stat-tol") return s.stationarity_tolerance;
  if (key == "comp-tol") return s.complementarity_tolerance;
  if (key == "rho0") return s.initial_penalty;
  if (key == "beta") return s.penalty_update_factor;
  if (key == "zero-penalty-first") return s.solve_zero_penalty_first ? 1 : 0;
  if (key == "max-iter") return s.max_iterations;
  if (key == "max-penalty") return s.max_penalty;
  if (key == "print-level") return s.print_level;
  if (key == "n-dynamic") return s.n_dynamic;
  if (key == "eta-dynamic") return s.eta_dynamic;
  if (key == "perturb-scale") return s.perturbation_scale;
  if (key == "seed") return static_cast<double>(s.rng_seed);
  set_error("unknown option '" + key + "'");
  return nan;
}

/* ---- solving ------------------------------------------------------------ */

lcqp_solution* lcqp_solve(const lcqp_problem* p, const lcqp_options* o) {
  if (!p) {
    set_error("problem is null");
    return nullptr;
  }
  lcqp_solution* out = nullptr;
  call([&] {
    const lcqp::ValidationReport rep = lcqp::validate(p->p);
    if (!rep.ok()) return fail(LCQP_ERR_VALIDATION, join_issues(rep));
    lcqp::SolverOptions opts = o ? o->o : lcqp::SolverOptions{};
    opts.log = &std::cerr;
    out = new lcqp_solution{lcqp::solve(p->p, opts), p->p.n, p->p.n_c,
                            p->p.n_A};
    return LCQP_OK;
  });
  return out;
}

void lcqp_solution_free(lcqp_solution* s) { delete s; }

int lcqp_solution_status(const lcqp_solution* s) {
  return s ? static_cast<int>(s->s.status) : LCQP_STATUS_SUBPROBLEM_FAILURE;
}

const char* lcqp_solution_status_name(const lcqp_solution* s) {
  return s ? lcqp::to_string(s->s.status) : "null";
}

const char* lcqp_solution_message(const lcqp_solution* s) {
  return s ? s->s.message.c_str() : "null";
}

double lcqp_solution_objective(const lcqp_solution* s) {
  return s ? s->s.objective : lcqp::kInf;
}

double lcqp_solution_phi(const lcqp_solution* s) {
  return s ? s->s.phi : lcqp::kInf;
}

double lcqp_solution_stationarity(const lcqp_solution* s) {
  return s ? s->s.stationarity : lcqp::kInf;
}

double lcqp_solution_penalty(const lcqp_solution* s) {
  return s ? s->s.penalty : 0.0;
}

int lcqp_solution_outer_iterations(const lcqp_solution* s) {
  return s ? s->s.outer_iterations : 0;
}

int lcqp_solution_iterations(const lcqp_solution* s) {
  return s ? s->s.iterations : 0;
}

int lcqp_solution_get_x(const lcqp_solution* s, double* x) {
  if (!s || !x) return fail(LCQP_ERR_ARGUMENT, "null argument");
  if (s->s.x.size() != s->n)
    return fail(LCQP_ERR_INTERNAL, "solution carries no point");
  Eigen::Map<lcqp::Vector>(x, s->n) = s->s.x;
  return LCQP_OK;
}

int lcqp_solution_get_duals(const lcqp_solution* s, double* y_L, double* y_R,
                            double* y_A, double* y_x) {
  if (!s) return fail(LCQP_ERR_ARGUMENT, "solution is null");
  const lcqp::DualBlocks& d = s->s.duals;
  const auto copy = [](double* dst, const lcqp::Vector& src, int size) {
    if (!dst) return true;
    if (src.size() != size) return false;
    Eigen::Map<lcqp::Vector>(dst, size) = src;
    return true;
  };
  if (!copy(y_L, d.y_L, s->n_c) || !copy(y_R, d.y_R, s->n_c) ||
      !copy(y_A, d.y_A, s->n_A) || !copy(y_x, d.y_x, s->n))
    return fail(LCQP_ERR_INTERNAL, "solution carries no duals");
  return LCQP_OK;
}

int lcqp_solution_save(const lcqp_solution* s, const char* path) {
  if (!s || !path) return fail(LCQP_ERR_ARGUMENT, "null argument");
  return call([&] {
    lcqp::SolutionFile f;
    f.n = s->n;
    f.n_c = s->n_c;
    f.n_A = s->n_A;
    f.x = s->s.x;
    if (s->s.duals.y_x.size() == s->n) f.duals = s->s.duals;
    try {
      lcqp::save_solution(path, f);
    } catch (const std::runtime_error& e) {
      return fail(LCQP_ERR_IO, e.what());
    }
    return LCQP_OK;
  });
}

int lcqp_solution_file_load(const char* path, int n, int n_c, int n_A,
                            double* x, double* y_L, double* y_R, double* y_A,
                            double* y_x, int* has_duals) {
  if (!path || !x || !has_duals) return fail(LCQP_ERR_ARGUMENT, "null argument");
  return call([&] {
    lcqp::SolutionFile f;
    try {
      f = lcqp::load_solution(path);
    } catch (const lcqp::ParseError& e) {
      return fail(LCQP_ERR_PARSE, e.what());
    } catch (const std::runtime_error& e) {
      return fail(LCQP_ERR_IO, e.what());
    }
    if (f.n != n || f.n_c != n_c || f.n_A != n_A)
      return fail(LCQP_ERR_ARGUMENT,
                  "solution dimensions do not match the problem");
    Eigen::Map<lcqp::Vector>(x, n) = f.x;
    *has_duals = f.duals ? 1 : 0;
    if (f.duals) {
      if (!y_L || !y_R || !y_A || !y_x)
        return fail(LCQP_ERR_ARGUMENT,
                    "file carries duals but a dual buffer is null");
      Eigen::Map<lcqp::Vector>(y_L, n_c) = f.duals->y_L;
      Eigen::Map<lcqp::Vector>(y_R, n_c) = f.duals->y_R;
      Eigen::Map<lcqp::Vector>(y_A, n_A) = f.duals->y_A;
      Eigen::Map<lcqp::Vector>(y_x, n) = f.duals->y_x;
    }
    return LCQP_OK;
  });
}

/* ---- certificates and global oracle ------------------------------------- */

int lcqp_verify(const lcqp_problem* p, const double* x, const double* y_L,
                const double* y_R, const double* y_A, const double* y_x,
                double tol, lcqp_verify_report* out) {
  if (!p || !x || !y_L || !y_R || !y_A || !y_x || !out)
    return fail(LCQP_ERR_ARGUMENT, "null argument");
  return call([&] {
    lcqp::DualBlocks d;
    d.y_L = to_vector(y_L, p->p.n_c);
    d.y_R = to_vector(y_R, p->p.n_c);
    d.y_A = to_vector(y_A, p->p.n_A);
    d.y_x = to_vector(y_x, p->p.n);
    const lcqp::StationarityReport rep = lcqp::verify_strong_stationarity(
        p->p, to_vector(x, p->p.n), d, tol > 0 ? tol : 1e-6);
    out->feasible = rep.feasible;
    out->complementary = rep.complementary;
    out->gradient_ok = rep.gradient_ok;
    out->signs_ok = rep.signs_ok;
    out->max_violation = rep.max_violation;
    out->phi = rep.phi;
    out->gradient_residual = rep.gradient_residual;
    out->worst_sign_violation = rep.worst_sign_violation;
    return LCQP_OK;
  });
}

double lcqp_penalty_bound(const lcqp_problem* p, const double* x,
                          const double* y_L, const double* y_R) {
  if (!p || !x || !y_L || !y_R) {
    set_error("null argument");
    return 0.0;
  }
  lcqp::DualBlocks d;
  d.y_L = to_vector(y_L, p->p.n_c);
  d.y_R = to_vector(y_R, p->p.n_c);
  return lcqp::penalty_bound(p->p, to_vector(x, p->p.n), d);
}

int lcqp_branch_enumerate(const lcqp_problem* p, int max_pairs, double* x,
                          double* objective, unsigned long long* branches,
                          unsigned long long* feasible_branches) {
  if (!p) return fail(LCQP_ERR_ARGUMENT, "problem is null");
  return call([&] {
    const lcqp::GlobalSearch g =
        lcqp::branch_enumerate(p->p, max_pairs > 0 ? max_pairs : 20);
    if (branches) *branches = g.branches;
    if (feasible_branches) *feasible_branches = g.feasible_branches;
    if (!g.found()) return fail(LCQP_ERR_INTERNAL, "no feasible branch");
    if (x) Eigen::Map<lcqp::Vector>(x, p->p.n) = g.x;
    if (objective) *objective = g.objective;
    return LCQP_OK;
  });
}

/* ---- performance profiles ----------------------------------------------- */

int lcqp_performance_profile(const double* seconds, int n_problems,
                             int n_solvers, const double* tau, int n_tau,
                             double* ratios, double* fraction) {
  if (!seconds || !tau || !fraction)
    return fail(LCQP_ERR_ARGUMENT, "null argument");
  if (n_problems < 1 || n_solvers < 1 || n_tau < 1)
    return fail(LCQP_ERR_ARGUMENT, "table and grid must be nonempty");
  return call([&] {
    const lcqp::Matrix times = to_matrix(seconds, n_problems, n_solvers);
    const lcqp::Vector grid = to_vector(tau, n_tau);
    const lcqp::ProfileResult res = lcqp::performance_profile(times, grid);
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    if (ratios)
      Eigen::Map<RowMajor>(ratios, n_problems, n_solvers) = res.ratios;
    Eigen::Map<RowMajor>(fraction, n_tau, n_solvers) = res.fraction;
    return LCQP_OK;
  });
}

} /* extern "C" */
