#include "lcqp/problem.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <sstream>

namespace lcqp {

double LcqpProblem::objective(const Vector& x) const {
  return 0.5 * x.dot(Q * x) + g.dot(x);
}

namespace {

void check_size(ValidationReport& rep, const char* what, long rows, long cols,
                long want_rows, long want_cols) {
  if (rows != want_rows || cols != want_cols) {
    std::ostringstream os;
    os << what << " has shape " << rows << "x" << cols << ", expected "
       << want_rows << "x" << want_cols;
    rep.issues.push_back({os.str()});
  }
}

void check_vec(ValidationReport& rep, const char* what, const Vector& v,
               long want) {
  if (v.size() != want) {
    std::ostringstream os;
    os << what << " has length " << v.size() << ", expected " << want;
    rep.issues.push_back({os.str()});
  }
}

void check_order(ValidationReport& rep, const char* what, const Vector& lo,
                 const Vector& up) {
  for (long i = 0; i < std::min(lo.size(), up.size()); ++i) {
    if (lo[i] > up[i]) {
      std::ostringstream os;
      os << what << " row " << i << ": lower bound " << lo[i]
         << " exceeds upper bound " << up[i];
      rep.issues.push_back({os.str()});
    }
  }
}

}  // namespace

ValidationReport validate(const LcqpProblem& p) {
  ValidationReport rep;
  if (p.n <= 0) rep.issues.push_back({"number of variables must be positive"});
  if (p.n_c < 0) rep.issues.push_back({"number of complementarity pairs must be nonnegative"});
  if (p.n_A < 0) rep.issues.push_back({"number of linear rows must be nonnegative"});
  if (!rep.ok()) return rep;

  check_size(rep, "Q", p.Q.rows(), p.Q.cols(), p.n, p.n);
  check_vec(rep, "g", p.g, p.n);
  check_size(rep, "L", p.L.rows(), p.L.cols(), p.n_c, p.n_c ? p.n : p.L.cols());
  check_size(rep, "R", p.R.rows(), p.R.cols(), p.n_c, p.n_c ? p.n : p.R.cols());
  check_vec(rep, "ell_L", p.ell_L, p.n_c);
  check_vec(rep, "u_L", p.u_L, p.n_c);
  check_vec(rep, "ell_R", p.ell_R, p.n_c);
  check_vec(rep, "u_R", p.u_R, p.n_c);
  check_size(rep, "A", p.A.rows(), p.A.cols(), p.n_A, p.n_A ? p.n : p.A.cols());
  check_vec(rep, "ell_A", p.ell_A, p.n_A);
  check_vec(rep, "u_A", p.u_A, p.n_A);
  check_vec(rep, "ell_x", p.ell_x, p.n);
  check_vec(rep, "u_x", p.u_x, p.n);
  if (!rep.ok()) return rep;

  const double sym_err = (p.Q - p.Q.transpose()).cwiseAbs().maxCoeff();
  const double sym_scale = std::max(1.0, p.Q.cwiseAbs().maxCoeff());
  if (!(sym_err <= 1e-12 * sym_scale)) {
    rep.issues.push_back({"Hessian not symmetric"});
  } else {
    Eigen::LLT<Matrix> llt(p.Q);
    if (llt.info() != Eigen::Success) {
      rep.issues.push_back({"Hessian not positive definite"});
    }
  }

  for (int i = 0; i < p.n_c; ++i) {
    if (!std::isfinite(p.ell_L[i]))
      rep.issues.push_back({"complementarity lower bound ell_L[" +
                            std::to_string(i) + "] not finite"});
    if (!std::isfinite(p.ell_R[i]))
      rep.issues.push_back({"complementarity lower bound ell_R[" +
                            std::to_string(i) + "] not finite"});
  }

  check_order(rep, "complementarity L", p.ell_L, p.u_L);
  check_order(rep, "complementarity R", p.ell_R, p.u_R);
  check_order(rep, "linear constraint", p.ell_A, p.u_A);
  check_order(rep, "variable bound", p.ell_x, p.u_x);
  return rep;
}

StackedConstraints stack(const LcqpProblem& p) {
  StackedConstraints s;
  s.n_c = p.n_c;
  s.n_A = p.n_A;
  s.n = p.n;
  const int m = s.total_rows();
  s.rows.setZero(m, p.n);
  s.lower.resize(m);
  s.upper.resize(m);
  s.origin.resize(m);

  int r = 0;
  for (int i = 0; i < p.n_c; ++i, ++r) {
    s.rows.row(r) = p.L.row(i);
    s.lower[r] = p.ell_L[i];
    s.upper[r] = p.u_L[i];
    s.origin[r] = {RowSource::ComplementarityL, i};
  }
  for (int i = 0; i < p.n_c; ++i, ++r) {
    s.rows.row(r) = p.R.row(i);
    s.lower[r] = p.ell_R[i];
    s.upper[r] = p.u_R[i];
    s.origin[r] = {RowSource::ComplementarityR, i};
  }
  for (int i = 0; i < p.n_A; ++i, ++r) {
    s.rows.row(r) = p.A.row(i);
    s.lower[r] = p.ell_A[i];
    s.upper[r] = p.u_A[i];
    s.origin[r] = {RowSource::General, i};
  }
  for (int i = 0; i < p.n; ++i, ++r) {
    s.rows(r, i) = 1.0;
    s.lower[r] = p.ell_x[i];
    s.upper[r] = p.u_x[i];
    s.origin[r] = {RowSource::Box, i};
  }
  return s;
}

bool StackedConstraints::contains(const Vector& x, double tol) const {
  return max_violation(x) <= tol;
}

double StackedConstraints::max_violation(const Vector& x) const {
  double worst = 0.0;
  const Vector v = rows * x;
  for (int r = 0; r < total_rows(); ++r) {
    if (!bound_absent(lower[r])) worst = std::max(worst, lower[r] - v[r]);
    if (!bound_absent(upper[r])) worst = std::max(worst, v[r] - upper[r]);
  }
  return worst;
}

PenaltyStructure PenaltyStructure::build(const LcqpProblem& p) {
  PenaltyStructure ps;
  if (p.n_c == 0) {
    ps.C.setZero(p.n, p.n);
    ps.g_phi.setZero(p.n);
    ps.const_phi = 0.0;
    return ps;
  }
  ps.C = p.L.transpose() * p.R;
  ps.C += ps.C.transpose().eval();
  ps.g_phi = -(p.R.transpose() * p.ell_L + p.L.transpose() * p.ell_R);
  ps.const_phi = p.ell_L.dot(p.ell_R);
  return ps;
}

double phi(const LcqpProblem& p, const Vector& x) {
  if (p.n_c == 0) return 0.0;
  return (p.L * x - p.ell_L).dot(p.R * x - p.ell_R);
}

double merit(const LcqpProblem& p, const PenaltyStructure& ps, double rho,
             const Vector& x) {
  const double quad = 0.5 * x.dot(p.Q * x) + 0.5 * rho * x.dot(ps.C * x);
  return quad + p.g.dot(x) + rho * ps.g_phi.dot(x);
}

Vector merit_gradient(const LcqpProblem& p, const PenaltyStructure& ps,
                      double rho, const Vector& x) {
  return p.Q * x + rho * (ps.C * x) + p.g + rho * ps.g_phi;
}

}  // namespace lcqp
