#pragma once

// Shared test helpers: deterministic random problem generators and small
// brute-force oracles. The oracles are deliberately independent of the
// library's iterative code paths — direct dense solves and enumeration only.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lcqp/problem.hpp"

namespace testsup {

using lcqp::kInf;
using lcqp::Matrix;
using lcqp::Vector;
using Rng = std::mt19937_64;

inline double unif(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gauss(Rng& rng, double sd = 1.0) {
  return std::normal_distribution<double>(0.0, sd)(rng);
}

inline Matrix random_spd(Rng& rng, int n, double shift = 0.5) {
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = gauss(rng);
  Matrix Q = M.transpose() * M + shift * Matrix::Identity(n, n);
  return 0.5 * (Q + Q.transpose());
}

// min |x - (1,1)|^2 subject to x1 >= 0 perp x2 >= 0. Global minima (1,0)
// and (0,1) with value 1; (t, t) is a penalty-saddle ridge.
inline lcqp::LcqpProblem toy_problem() {
  lcqp::LcqpProblem p;
  p.n = 2;
  p.n_c = 1;
  p.n_A = 0;
  p.Q = 2.0 * Matrix::Identity(2, 2);
  p.g = Vector::Constant(2, -2.0);
  p.L.resize(1, 2);
  p.L << 1.0, 0.0;
  p.R.resize(1, 2);
  p.R << 0.0, 1.0;
  p.ell_L = Vector::Zero(1);
  p.u_L = Vector::Constant(1, kInf);
  p.ell_R = Vector::Zero(1);
  p.u_R = Vector::Constant(1, kInf);
  p.A.resize(0, 2);
  p.ell_A.resize(0);
  p.u_A.resize(0);
  p.ell_x = Vector::Constant(2, -kInf);
  p.u_x = Vector::Constant(2, kInf);
  p.objective_constant = 2.0;
  return p;
}

// Random dense LCQP whose relaxed set provably contains an anchor point; with
// probability ~0.7 the anchor also satisfies the complementarity constraint,
// so at least one branch of the problem is feasible.
inline lcqp::LcqpProblem random_lcqp(Rng& rng, int max_n = 6, int max_nc = 3,
                                     int max_na = 3) {
  lcqp::LcqpProblem p;
  p.n = 2 + static_cast<int>(rng() % (max_n - 1));
  p.n_c = 1 + static_cast<int>(rng() % max_nc);
  p.n_A = static_cast<int>(rng() % (max_na + 1));

  p.Q = random_spd(rng, p.n);
  p.g.resize(p.n);
  for (int i = 0; i < p.n; ++i) p.g[i] = gauss(rng, 2.0);

  Vector anchor(p.n);
  for (int i = 0; i < p.n; ++i) anchor[i] = gauss(rng);

  auto random_row = [&]() {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(p.n);
    if (rng() % 2 == 0) {
      row[rng() % p.n] = 1.0;
    } else {
      for (int j = 0; j < p.n; ++j) row[j] = gauss(rng);
    }
    return row;
  };

  p.L.resize(p.n_c, p.n);
  p.R.resize(p.n_c, p.n);
  p.ell_L.resize(p.n_c);
  p.ell_R.resize(p.n_c);
  p.u_L.resize(p.n_c);
  p.u_R.resize(p.n_c);
  const bool anchored_complementary = unif(rng, 0, 1) < 0.7;
  for (int i = 0; i < p.n_c; ++i) {
    p.L.row(i) = random_row();
    p.R.row(i) = random_row();
    const double lv = p.L.row(i).dot(anchor);
    const double rv = p.R.row(i).dot(anchor);
    if (anchored_complementary) {
      // Anchor sits on one side of the pair exactly.
      if (rng() % 2 == 0) {
        p.ell_L[i] = lv;
        p.ell_R[i] = rv - std::abs(gauss(rng)) - 0.1;
      } else {
        p.ell_L[i] = lv - std::abs(gauss(rng)) - 0.1;
        p.ell_R[i] = rv;
      }
    } else {
      p.ell_L[i] = lv - std::abs(gauss(rng)) - 0.1;
      p.ell_R[i] = rv - std::abs(gauss(rng)) - 0.1;
    }
    p.u_L[i] = rng() % 5 < 3 ? kInf : lv + std::abs(gauss(rng)) + 0.5;
    p.u_R[i] = rng() % 5 < 3 ? kInf : rv + std::abs(gauss(rng)) + 0.5;
  }

  p.A.resize(p.n_A, p.n);
  p.ell_A.resize(p.n_A);
  p.u_A.resize(p.n_A);
  for (int i = 0; i < p.n_A; ++i) {
    p.A.row(i) = random_row();
    const double av = p.A.row(i).dot(anchor);
    if (rng() % 5 == 0) {
      p.ell_A[i] = p.u_A[i] = av;  // equality row
    } else {
      p.ell_A[i] = rng() % 3 == 0 ? -kInf : av - std::abs(gauss(rng)) - 0.1;
      p.u_A[i] = rng() % 3 == 0 ? kInf : av + std::abs(gauss(rng)) + 0.1;
    }
  }

  p.ell_x.resize(p.n);
  p.u_x.resize(p.n);
  for (int i = 0; i < p.n; ++i) {
    p.ell_x[i] = rng() % 2 == 0 ? -kInf : anchor[i] - std::abs(gauss(rng)) - 0.1;
    p.u_x[i] = rng() % 2 == 0 ? kInf : anchor[i] + std::abs(gauss(rng)) + 0.1;
  }
  return p;
}

// Brute-force minimizer of 1/2 x'Qx + q'x over lower <= rows*x <= upper,
// found by enumerating every assignment of active sides and solving the
// corresponding equality-constrained KKT system densely. Exponential in the
// row count; keep instances tiny.
struct BruteQpResult {
  bool found = false;
  double objective = kInf;
  Vector x;
};

inline BruteQpResult brute_force_qp(const Matrix& Q, const Vector& q,
                                    const lcqp::StackedConstraints& s) {
  const int n = static_cast<int>(Q.rows());
  const int m = s.total_rows();
  BruteQpResult best;

  std::vector<std::vector<int>> choices(m);  // 0 inactive, +1 lower, -1 upper
  for (int r = 0; r < m; ++r) {
    const bool lo = !lcqp::bound_absent(s.lower[r]);
    const bool up = !lcqp::bound_absent(s.upper[r]);
    if (lo && up && s.lower[r] == s.upper[r]) {
      choices[r] = {+1};  // equality row is always active
      continue;
    }
    choices[r].push_back(0);
    if (lo) choices[r].push_back(+1);
    if (up) choices[r].push_back(-1);
  }

  std::vector<size_t> idx(m, 0);
  while (true) {
    std::vector<int> act(m);
    for (int r = 0; r < m; ++r) act[r] = choices[r][idx[r]];

    std::vector<int> active;
    for (int r = 0; r < m; ++r)
      if (act[r] != 0) active.push_back(r);
    const int k = static_cast<int>(active.size());
    {
      // Dependent active rows make K singular; the residual check below keeps
      // consistent systems (unique x, non-unique multipliers) and drops the rest.
      Matrix K = Matrix::Zero(n + k, n + k);
      Vector rhs(n + k);
      K.topLeftCorner(n, n) = Q;
      rhs.head(n) = -q;
      for (int j = 0; j < k; ++j) {
        const int r = active[j];
        K.block(0, n + j, n, 1) = -s.rows.row(r).transpose();
        K.block(n + j, 0, 1, n) = s.rows.row(r);
        rhs[n + j] = act[r] > 0 ? s.lower[r] : s.upper[r];
      }
      Eigen::FullPivLU<Matrix> lu(K);
      const Vector z = lu.solve(rhs);
      const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
      if ((K * z - rhs).lpNorm<Eigen::Infinity>() <= 1e-9 * scale) {
        const Vector x = z.head(n);
        bool ok = true;
        const Vector vals = s.rows * x;
        for (int r = 0; r < m && ok; ++r) {
          if (!lcqp::bound_absent(s.lower[r]) && vals[r] < s.lower[r] - 1e-8)
            ok = false;
          if (!lcqp::bound_absent(s.upper[r]) && vals[r] > s.upper[r] + 1e-8)
            ok = false;
        }
        for (int j = 0; j < k && ok; ++j) {
          const int r = active[j];
          if (s.lower[r] == s.upper[r]) continue;  // equality: free sign
          const double y = z[n + j];
          if (act[r] > 0 && y < -1e-8) ok = false;
          if (act[r] < 0 && y > 1e-8) ok = false;
        }
        if (ok) {
          const double obj = 0.5 * x.dot(Q * x) + q.dot(x);
          if (!best.found || obj < best.objective) {
            best.found = true;
            best.objective = obj;
            best.x = x;
          }
        }
      }
    }

    int r = 0;
    while (r < m && ++idx[r] == choices[r].size()) idx[r++] = 0;
    if (r == m) break;
  }
  return best;
}

// Forward simulation of the scalar switched integrator x' = 2 - sgn(x) under
// implicit Euler: per step exactly one of three cases is consistent with the
// complementarity pairs (x_k + lam_k perp 1 - y_k, lam_k perp y_k).
//   below zero:  y = 0, x_k = x_{k-1} + 3h, needs x_k <= 0 (lam = -x_k)
//   above zero:  y = 1, x_k = x_{k-1} + h,  needs x_k >= 0 (lam = 0)
//   crossing:    x_k = 0, y = (x_{k-1} + 3h) / 2h in [0,1], lam = 0
// Returns the full variable vector in the layout (x_0..x_N, y_1..y_N,
// lam_1..lam_N) together with the objective sum h x_k^2 (k<N) + (x_N-5/3)^2.
struct IvocpTrajectory {
  Vector z;
  double objective = 0.0;
};

inline IvocpTrajectory ivocp_forward(int N, double x0) {
  const double h = 2.0 / N;
  IvocpTrajectory out;
  out.z = Vector::Zero(3 * N + 1);
  out.z[0] = x0;
  double x = x0;
  for (int k = 1; k <= N; ++k) {
    double xn, y, lam;
    if (x + 3 * h <= 0) {
      xn = x + 3 * h;
      y = 0.0;
      lam = -xn;
    } else if (x + h >= 0) {
      xn = x + h;
      y = 1.0;
      lam = 0.0;
    } else {
      xn = 0.0;
      y = (x + 3 * h) / (2 * h);
      lam = 0.0;
    }
    out.z[k] = xn;
    out.z[N + k] = y;
    out.z[2 * N + k] = lam;
    x = xn;
  }
  for (int k = 0; k < N; ++k) out.objective += h * out.z[k] * out.z[k];
  const double d = out.z[N] - 5.0 / 3.0;
  out.objective += d * d;
  return out;
}

// Discrete objective of the switched-integrator family as a function of the
// free initial value alone, minimized by scanning a uniform grid.
inline double ivocp_scan_best(int N, double lo = -3.0, double hi = 0.5,
                              int samples = 4001) {
  double best = kInf;
  for (int i = 0; i < samples; ++i) {
    const double x0 = lo + (hi - lo) * i / (samples - 1);
    best = std::min(best, ivocp_forward(N, x0).objective);
  }
  return best;
}

// Minimizer of f over [0,1] by golden-section search plus an endpoint
// comparison, so concave and linear sections are handled too.
template <class F>
inline double golden_min(F f) {
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 120 && (b - a) > 1e-12; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = f(d);
    }
  }
  const double xm = 0.5 * (a + b);
  double bestx = xm, bestf = f(xm);
  for (double cand : {0.0, 1.0}) {
    const double fv = f(cand);
    if (fv < bestf) {
      bestf = fv;
      bestx = cand;
    }
  }
  return bestx;
}

}  // namespace testsup
