// Exercises the shared-library C boundary exactly as an external client
// would: opaque handles, error codes, buffers. No C++ headers from the
// library are included on purpose.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "lcqp.h"

namespace {

// min |x-(1,1)|^2 with x1 >= 0 perp x2 >= 0, objective constant 2.
lcqp_problem* make_toy() {
  lcqp_problem* p = lcqp_problem_create(2, 1, 0);
  REQUIRE(p != nullptr);
  const double Q[4] = {2, 0, 0, 2};
  const double g[2] = {-2, -2};
  REQUIRE(lcqp_problem_set_objective(p, Q, g, 2.0) == LCQP_OK);
  const double L[2] = {1, 0};
  const double R[2] = {0, 1};
  const double zero[1] = {0};
  REQUIRE(lcqp_problem_set_complementarity(p, L, zero, nullptr, R, zero,
                                           nullptr) == LCQP_OK);
  return p;
}

lcqp_options* quiet_options() {
  lcqp_options* o = lcqp_options_create();
  REQUIRE(o != nullptr);
  REQUIRE(lcqp_options_set(o, "print-level", 0) == LCQP_OK);
  return o;
}

}  // namespace

TEST_CASE("version and error channel") {
  CHECK(std::string(lcqp_version()) == "1.0.0");
  lcqp_options* o = lcqp_options_create();
  CHECK(lcqp_options_set(o, "no-such-option", 1.0) == LCQP_ERR_ARGUMENT);
  CHECK(std::string(lcqp_last_error()).find("no-such-option") !=
        std::string::npos);
  lcqp_options_free(o);
}

TEST_CASE("toy problem through the full C surface") {
  lcqp_problem* p = make_toy();
  CHECK(lcqp_problem_validate(p) == LCQP_OK);
  CHECK(lcqp_problem_n(p) == 2);
  CHECK(lcqp_problem_nc(p) == 1);
  CHECK(lcqp_problem_na(p) == 0);
  CHECK(lcqp_problem_objective_constant(p) == 2.0);

  lcqp_options* o = quiet_options();
  lcqp_solution* s = lcqp_solve(p, o);
  REQUIRE(s != nullptr);
  CHECK(lcqp_solution_status(s) == LCQP_STATUS_SOLVED);
  CHECK(std::string(lcqp_solution_status_name(s)) == "solved");
  CHECK(lcqp_solution_objective(s) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(lcqp_solution_phi(s) <= 1e-12);
  CHECK(lcqp_solution_iterations(s) >= 1);
  CHECK(lcqp_solution_outer_iterations(s) >= 1);

  double x[2], yL[1], yR[1], yx[2];
  REQUIRE(lcqp_solution_get_x(s, x) == LCQP_OK);
  // one coordinate at 1, the other at 0
  CHECK(std::min(x[0], x[1]) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::max(x[0], x[1]) == doctest::Approx(1.0).epsilon(1e-9));
  REQUIRE(lcqp_solution_get_duals(s, yL, yR, nullptr, yx) == LCQP_OK);

  lcqp_verify_report rep;
  double yA[1] = {0};
  REQUIRE(lcqp_verify(p, x, yL, yR, yA, yx, 0.0, &rep) == LCQP_OK);
  CHECK(rep.feasible);
  CHECK(rep.complementary);
  CHECK(rep.gradient_ok);
  CHECK(rep.signs_ok);
  CHECK(rep.phi <= 1e-12);

  // The inactive vertex leaves one multiplier at -2; the merit needs
  // penalty weight 3 to hold the point.
  CHECK(lcqp_penalty_bound(p, x, yL, yR) ==
        doctest::Approx(3.0).epsilon(1e-6));

  lcqp_solution_free(s);
  lcqp_options_free(o);
  lcqp_problem_free(p);
}

TEST_CASE("validation failures carry diagnostics and block solve") {
  lcqp_problem* p = lcqp_problem_create(2, 0, 0);
  const double Q[4] = {1, 0, 0, -1};  // indefinite
  const double g[2] = {0, 0};
  REQUIRE(lcqp_problem_set_objective(p, Q, g, 0.0) == LCQP_OK);
  CHECK(lcqp_problem_validate(p) == LCQP_ERR_VALIDATION);
  CHECK(std::string(lcqp_last_error()).size() > 0);
  CHECK(lcqp_solve(p, nullptr) == nullptr);
  lcqp_problem_free(p);
}

TEST_CASE("options set, get, and range checks") {
  lcqp_options* o = lcqp_options_create();
  CHECK(lcqp_options_get(o, "rho0") == doctest::Approx(0.01));
  CHECK(lcqp_options_get(o, "beta") == 2.0);
  CHECK(lcqp_options_get(o, "zero-penalty-first") == 1.0);
  CHECK(lcqp_options_get(o, "max-iter") == 1000.0);
  CHECK(lcqp_options_get(o, "n-dynamic") == 3.0);
  CHECK(lcqp_options_set(o, "rho0", 0.5) == LCQP_OK);
  CHECK(lcqp_options_get(o, "rho0") == 0.5);
  CHECK(lcqp_options_set(o, "rho0", -1.0) == LCQP_ERR_ARGUMENT);
  CHECK(lcqp_options_set(o, "beta", 1.0) == LCQP_ERR_ARGUMENT);
  CHECK(lcqp_options_set(o, "print-level", 7) == LCQP_ERR_ARGUMENT);
  CHECK(lcqp_options_set(o, "eta-dynamic", 1.5) == LCQP_ERR_ARGUMENT);
  CHECK(std::isnan(lcqp_options_get(o, "bogus")));
  lcqp_options_free(o);
}

TEST_CASE("generators expose the documented dimensions") {
  struct Row {
    lcqp_problem* p;
    int n, n_c, n_A;
  };
  const Row rows[] = {
      {lcqp_gen_toy(), 2, 1, 0},
      {lcqp_gen_ivocp(50, -1.0), 151, 100, 50},
      {lcqp_gen_masses(2, 50, 2.0), 554, 200, 304},
      {lcqp_gen_intqp(3, 2.3), 4, 3, 1},
  };
  for (const Row& r : rows) {
    REQUIRE(r.p != nullptr);
    CHECK(lcqp_problem_n(r.p) == r.n);
    CHECK(lcqp_problem_nc(r.p) == r.n_c);
    CHECK(lcqp_problem_na(r.p) == r.n_A);
    CHECK(lcqp_problem_validate(r.p) == LCQP_OK);
    lcqp_problem_free(r.p);
  }
  CHECK(lcqp_gen_ivocp(0, -1.0) == nullptr);
  CHECK(std::string(lcqp_last_error()).size() > 0);
}

TEST_CASE("problem files round-trip through the C API") {
  lcqp_problem* p = lcqp_gen_ivocp(5, -1.3);
  REQUIRE(lcqp_problem_save(p, "capi_ivocp.lcqp") == LCQP_OK);
  lcqp_problem* q = lcqp_problem_load("capi_ivocp.lcqp");
  REQUIRE(q != nullptr);
  CHECK(lcqp_problem_n(q) == lcqp_problem_n(p));
  CHECK(lcqp_problem_nc(q) == lcqp_problem_nc(p));
  CHECK(lcqp_problem_na(q) == lcqp_problem_na(p));

  lcqp_options* o = quiet_options();
  lcqp_solution* s1 = lcqp_solve(p, o);
  lcqp_solution* s2 = lcqp_solve(q, o);
  REQUIRE(s1 != nullptr);
  REQUIRE(s2 != nullptr);
  CHECK(lcqp_solution_objective(s1) == lcqp_solution_objective(s2));
  CHECK(lcqp_solution_iterations(s1) == lcqp_solution_iterations(s2));
  lcqp_solution_free(s1);
  lcqp_solution_free(s2);
  lcqp_options_free(o);
  lcqp_problem_free(p);
  lcqp_problem_free(q);

  CHECK(lcqp_problem_load("missing_file.lcqp") == nullptr);
}

TEST_CASE("solution files round-trip through the C API") {
  lcqp_problem* p = make_toy();
  lcqp_options* o = quiet_options();
  lcqp_solution* s = lcqp_solve(p, o);
  REQUIRE(s != nullptr);
  REQUIRE(lcqp_solution_save(s, "capi_toy.sol") == LCQP_OK);

  double x[2], yL[1], yR[1], yA[1], yx[2];
  int has_duals = -1;
  REQUIRE(lcqp_solution_file_load("capi_toy.sol", 2, 1, 0, x, yL, yR, yA, yx,
                                  &has_duals) == LCQP_OK);
  CHECK(has_duals == 1);
  double xs[2];
  REQUIRE(lcqp_solution_get_x(s, xs) == LCQP_OK);
  CHECK(x[0] == xs[0]);
  CHECK(x[1] == xs[1]);

  // wrong dimensions are rejected
  CHECK(lcqp_solution_file_load("capi_toy.sol", 3, 1, 0, x, yL, yR, yA, yx,
                                &has_duals) == LCQP_ERR_ARGUMENT);
  lcqp_solution_free(s);
  lcqp_options_free(o);
  lcqp_problem_free(p);
}

TEST_CASE("branch enumeration and evaluation helpers") {
  lcqp_problem* p = lcqp_gen_intqp(3, 2.3);
  double x[4], objective = 0.0;
  unsigned long long branches = 0, feasible = 0;
  REQUIRE(lcqp_branch_enumerate(p, 0, x, &objective, &branches, &feasible) ==
          LCQP_OK);
  CHECK(branches == 8);
  CHECK(feasible == 8);
  CHECK(objective == doctest::Approx(0.09).epsilon(1e-6));
  CHECK(x[0] == doctest::Approx(2.0).epsilon(1e-9));

  CHECK(lcqp_problem_eval_objective(p, x) ==
        doctest::Approx(objective).epsilon(1e-12));
  CHECK(lcqp_problem_eval_phi(p, x) == doctest::Approx(0.0));
  CHECK(lcqp_problem_eval_violation(p, x) <= 1e-9);

  // cap enforced
  CHECK(lcqp_branch_enumerate(p, 2, x, &objective, nullptr, nullptr) ==
        LCQP_ERR_ARGUMENT);
  lcqp_problem_free(p);
}

TEST_CASE("performance profile through flat buffers") {
  // problems x solvers = 2 x 2, one failure
  const double seconds[4] = {2, 1, 3, -1};
  const double tau[3] = {1, 2, 4};
  double ratios[4], fraction[6];
  REQUIRE(lcqp_performance_profile(seconds, 2, 2, tau, 3, ratios, fraction) ==
          LCQP_OK);
  CHECK(ratios[0] == 2.0);
  CHECK(ratios[1] == 1.0);
  CHECK(ratios[2] == 1.0);
  CHECK(std::isinf(ratios[3]));
  // tau=1: solver 1 wins problem 2 only; solver 2 wins problem 1 only
  CHECK(fraction[0] == 0.5);
  CHECK(fraction[1] == 0.5);
  // tau=2: solver 1 adds problem 1 at ratio 2
  CHECK(fraction[2] == 1.0);
  CHECK(fraction[3] == 0.5);
  CHECK(fraction[4] == 1.0);
  CHECK(fraction[5] == 0.5);

  CHECK(lcqp_performance_profile(nullptr, 1, 1, tau, 1, nullptr, fraction) ==
        LCQP_ERR_ARGUMENT);
}
