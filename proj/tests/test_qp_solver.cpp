#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lcqp/qp_solver.hpp"
#include "support.hpp"

using namespace lcqp;

namespace {

// Stacked system with only general rows and boxes (no complementarity), the
// shape most QP unit tests want.
StackedConstraints make_stacked(const Matrix& A, const Vector& lo_A,
                                const Vector& up_A, const Vector& lo_x,
                                const Vector& up_x) {
  LcqpProblem p;
  p.n = static_cast<int>(lo_x.size());
  p.n_c = 0;
  p.n_A = static_cast<int>(A.rows());
  p.Q = Matrix::Identity(p.n, p.n);
  p.g = Vector::Zero(p.n);
  p.L.resize(0, p.n);
  p.R.resize(0, p.n);
  p.ell_L.resize(0);
  p.u_L.resize(0);
  p.ell_R.resize(0);
  p.u_R.resize(0);
  p.A = A;
  p.ell_A = lo_A;
  p.u_A = up_A;
  p.ell_x = lo_x;
  p.u_x = up_x;
  return stack(p);
}

// Random box-and-rows QP small enough for the brute-force oracle.
struct SmallQp {
  Matrix Q;
  Vector q;
  StackedConstraints s;
};

SmallQp random_small_qp(testsup::Rng& rng) {
  const int n = 1 + static_cast<int>(rng() % 4);
  const int na = static_cast<int>(rng() % 4);
  SmallQp qp;
  qp.Q = testsup::random_spd(rng, n);
  qp.q.resize(n);
  for (int i = 0; i < n; ++i) qp.q[i] = testsup::gauss(rng, 2.0);

  Vector anchor(n);
  for (int i = 0; i < n; ++i) anchor[i] = testsup::gauss(rng);

  Matrix A(na, n);
  Vector lo_A(na), up_A(na);
  for (int r = 0; r < na; ++r) {
    for (int j = 0; j < n; ++j) A(r, j) = testsup::gauss(rng);
    const double v = A.row(r).dot(anchor);
    if (rng() % 4 == 0) {
      lo_A[r] = up_A[r] = v;
    } else {
      lo_A[r] = rng() % 3 == 0 ? -kInf : v - std::abs(testsup::gauss(rng)) - 0.05;
      up_A[r] = rng() % 3 == 0 ? kInf : v + std::abs(testsup::gauss(rng)) + 0.05;
    }
  }
  Vector lo_x(n), up_x(n);
  for (int i = 0; i < n; ++i) {
    lo_x[i] = rng() % 2 == 0 ? -kInf : anchor[i] - std::abs(testsup::gauss(rng)) - 0.05;
    up_x[i] = rng() % 2 == 0 ? kInf : anchor[i] + std::abs(testsup::gauss(rng)) + 0.05;
  }
  qp.s = make_stacked(A, lo_A, up_A, lo_x, up_x);
  return qp;
}

void check_kkt(const Matrix& Q, const Vector& q, const StackedConstraints& s,
               const QpSolution& sol, double tol) {
  REQUIRE(sol.status == QpStatus::Optimal);
  // Primal feasibility.
  CHECK(s.max_violation(sol.x) <= tol);
  // Stationarity with the stacked multipliers.
  const Vector grad = Q * sol.x + q - s.rows.transpose() * sol.dual;
  CHECK(grad.lpNorm<Eigen::Infinity>() <=
        tol * std::max(1.0, q.lpNorm<Eigen::Infinity>()));
  // Sign convention and complementary slackness.
  const Vector vals = s.rows * sol.x;
  for (int r = 0; r < s.total_rows(); ++r) {
    if (s.lower[r] == s.upper[r] && !bound_absent(s.lower[r])) continue;
    if (sol.dual[r] > tol) {
      CHECK(std::abs(vals[r] - s.lower[r]) <= 1e2 * tol);
    } else if (sol.dual[r] < -tol) {
      CHECK(std::abs(vals[r] - s.upper[r]) <= 1e2 * tol);
    }
  }
}

}  // namespace

TEST_CASE("scalar box QP lands on the upper bound with a negative dual") {
  Matrix Q(1, 1);
  Q << 2.0;
  Vector q(1);
  q << -2.0;
  const auto s = make_stacked(Matrix(0, 1), Vector(0), Vector(0),
                              Vector::Zero(1), Vector::Constant(1, 0.3));
  QpWorkspace ws(Q, s);
  const QpSolution sol = ws.solve(q);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(sol.dual[0] == doctest::Approx(-1.4).epsilon(1e-12));
}

TEST_CASE("equality row is honored and keeps a free-signed dual") {
  Matrix Q = 2.0 * Matrix::Identity(2, 2);
  Vector q = Vector::Zero(2);
  Matrix A(1, 2);
  A << 1.0, 1.0;
  const auto s = make_stacked(A, Vector::Ones(1), Vector::Ones(1),
                              Vector::Constant(2, -kInf),
                              Vector::Constant(2, kInf));
  QpWorkspace ws(Q, s);
  const QpSolution sol = ws.solve(q);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.x[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.dual[0] == doctest::Approx(1.0).epsilon(1e-12));

  // Flip the sign of the pull: the equality dual goes negative, the row stays.
  q << 4.0, 4.0;
  const QpSolution sol2 = ws.solve(q);
  REQUIRE(sol2.status == QpStatus::Optimal);
  CHECK(sol2.x[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol2.dual[0] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("non positive definite Hessian is rejected at setup") {
  Matrix Q(1, 1);
  Q << -1.0;
  const auto s = make_stacked(Matrix(0, 1), Vector(0), Vector(0),
                              Vector::Zero(1), Vector::Ones(1));
  CHECK_THROWS_AS(QpWorkspace(Q, s), std::invalid_argument);
}

TEST_CASE("inconsistent rows are reported infeasible") {
  Matrix Q = Matrix::Identity(1, 1);
  Matrix A(2, 1);
  A << 1.0, 1.0;
  Vector lo(2), up(2);
  lo << 1.0, -kInf;
  up << kInf, 0.0;  // x >= 1 and x <= 0
  const auto s = make_stacked(A, lo, up, Vector::Constant(1, -kInf),
                              Vector::Constant(1, kInf));
  QpWorkspace ws(Q, s);
  const QpSolution sol = ws.solve(Vector::Zero(1));
  CHECK(sol.status == QpStatus::Infeasible);
}

TEST_CASE("duplicated (dependent) rows are skipped, not fatal") {
  Matrix Q = Matrix::Identity(2, 2);
  Vector q = Vector::Constant(2, -5.0);
  Matrix A(2, 2);
  A << 1.0, 1.0, 1.0, 1.0;
  Vector lo = Vector::Constant(2, -kInf), up = Vector::Ones(2);
  const auto s = make_stacked(A, lo, up, Vector::Constant(2, -kInf),
                              Vector::Constant(2, kInf));
  QpWorkspace ws(Q, s);
  const QpSolution sol = ws.solve(q);
  REQUIRE(sol.status == QpStatus::Optimal);
  CHECK(sol.x[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.x[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("warm start with an unchanged linear term does no work") {
  testsup::Rng rng(101);
  for (int t = 0; t < 10; ++t) {
    const SmallQp qp = random_small_qp(rng);
    QpWorkspace ws(qp.Q, qp.s);
    const QpSolution first = ws.solve(qp.q);
    if (first.status != QpStatus::Optimal) continue;
    const QpSolution second = ws.solve(qp.q);
    REQUIRE(second.status == QpStatus::Optimal);
    CHECK(second.working_set_changes == 0);
    CHECK((second.x - first.x).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("random QPs match brute-force enumeration") {
  testsup::Rng rng(202);
  int solved = 0;
  for (int t = 0; t < 120; ++t) {
    const SmallQp qp = random_small_qp(rng);
    const auto oracle = testsup::brute_force_qp(qp.Q, qp.q, qp.s);
    QpWorkspace ws(qp.Q, qp.s);
    const QpSolution sol = ws.solve(qp.q);
    REQUIRE(oracle.found);  // instances are feasible by construction
    REQUIRE(sol.status == QpStatus::Optimal);
    const double obj = 0.5 * sol.x.dot(qp.Q * sol.x) + qp.q.dot(sol.x);
    CHECK(obj == doctest::Approx(oracle.objective).epsilon(1e-8));
    CHECK((sol.x - oracle.x).lpNorm<Eigen::Infinity>() <= 1e-7);
    check_kkt(qp.Q, qp.q, qp.s, sol, 1e-9);
    ++solved;
  }
  CHECK(solved == 120);
}

TEST_CASE("parametric sweep keeps iterates consistent with the oracle") {
  testsup::Rng rng(303);
  for (int t = 0; t < 15; ++t) {
    const SmallQp qp = random_small_qp(rng);
    QpWorkspace ws(qp.Q, qp.s);
    Vector dq(qp.q.size());
    for (int i = 0; i < dq.size(); ++i) dq[i] = testsup::gauss(rng);
    for (int step = 0; step <= 6; ++step) {
      const Vector q = qp.q + (step / 6.0) * dq;
      const QpSolution sol = ws.solve(q);
      REQUIRE(sol.status == QpStatus::Optimal);
      const auto oracle = testsup::brute_force_qp(qp.Q, q, qp.s);
      REQUIRE(oracle.found);
      const double obj = 0.5 * sol.x.dot(qp.Q * sol.x) + q.dot(sol.x);
      CHECK(obj == doctest::Approx(oracle.objective).epsilon(1e-8));
    }
  }
}

TEST_CASE("badly scaled Hessians still meet the tolerance contract") {
  // Mimics the benchmark regularization: curvature entries spanning 8-9
  // orders of magnitude with large linear terms on the weak directions.
  Matrix Q = Matrix::Zero(3, 3);
  Q(0, 0) = 0.08;
  Q(1, 1) = 2.0;
  Q(2, 2) = 1e-8;
  Vector q(3);
  q << 0.0, -10.0 / 3.0, 1e4;
  Matrix A(1, 3);
  A << 1.0, -1.0, 1.0;  // x0 - x1 + lam = 0.12
  const auto s = make_stacked(A, Vector::Constant(1, 0.12),
                              Vector::Constant(1, 0.12), Vector::Zero(3),
                              Vector::Constant(3, kInf));
  QpWorkspace ws(Q, s);
  const QpSolution sol = ws.solve(q);
  check_kkt(Q, q, s, sol, 1e-10);
  const auto oracle = testsup::brute_force_qp(Q, q, s);
  REQUIRE(oracle.found);
  CHECK(0.5 * sol.x.dot(Q * sol.x) + q.dot(sol.x) ==
        doctest::Approx(oracle.objective).epsilon(1e-9));
}

TEST_CASE("set_start rejects infeasible points") {
  Matrix Q = Matrix::Identity(1, 1);
  const auto s = make_stacked(Matrix(0, 1), Vector(0), Vector(0),
                              Vector::Zero(1), Vector::Ones(1));
  QpWorkspace ws(Q, s);
  CHECK_THROWS_AS(ws.set_start(Vector::Constant(1, 2.0)), std::invalid_argument);
}

TEST_CASE("feasible point finder projects onto the rows") {
  Matrix A(1, 2);
  A << 1.0, 1.0;
  const auto s = make_stacked(A, Vector::Ones(1), Vector::Ones(1),
                              Vector::Zero(2), Vector::Constant(2, kInf));
  const auto f = find_feasible_point(s, Vector::Constant(2, 5.0));
  REQUIRE(f.has_value());
  CHECK(s.max_violation(*f) <= 1e-10);

  Vector lo(1), up(1);
  Matrix A2(2, 2);
  A2 << 1.0, 0.0, 1.0, 0.0;
  Vector lo2(2), up2(2);
  lo2 << 1.0, -kInf;
  up2 << kInf, 0.0;
  const auto s2 = make_stacked(A2, lo2, up2, Vector::Constant(2, -kInf),
                               Vector::Constant(2, kInf));
  CHECK_FALSE(find_feasible_point(s2, Vector::Zero(2)).has_value());
}
