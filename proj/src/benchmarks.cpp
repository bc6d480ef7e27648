#include "lcqp/benchmarks.hpp"

#include <cmath>
#include <stdexcept>

namespace lcqp {

namespace {

// Auxiliary variables (switch indicators, contact multipliers) carry no cost
// of their own; this diagonal keeps Q positive definite. It shifts optima by
// at most 1e-8 * |aux|^2.
constexpr double kAuxDiag = 1e-8;

void clear_bounds(LcqpProblem& p) {
  p.u_L = Vector::Constant(p.n_c, kInf);
  p.u_R = Vector::Constant(p.n_c, kInf);
  p.ell_x = Vector::Constant(p.n, -kInf);
  p.u_x = Vector::Constant(p.n, kInf);
}

}  // namespace

LcqpProblem gen_toy() {
  LcqpProblem p;
  p.n = 2;
  p.n_c = 1;
  p.n_A = 0;
  p.Q = 2.0 * Matrix::Identity(2, 2);
  p.g = Vector::Constant(2, -2.0);
  p.L = Matrix::Zero(1, 2);
  p.L(0, 0) = 1.0;
  p.R = Matrix::Zero(1, 2);
  p.R(0, 1) = 1.0;
  p.ell_L = Vector::Zero(1);
  p.ell_R = Vector::Zero(1);
  p.A.resize(0, 2);
  p.ell_A.resize(0);
  p.u_A.resize(0);
  p.objective_constant = 2.0;
  clear_bounds(p);
  return p;
}

LcqpProblem gen_ivocp(const IvocpSpec& spec) {
  if (spec.N < 1) throw std::invalid_argument("ivocp: N must be >= 1");
  const int N = spec.N;
  const double h = 2.0 / N;

  LcqpProblem p;
  p.n = 3 * N + 1;
  p.n_A = N;
  p.n_c = 2 * N;

  // layout: x_k at k (k=0..N), y_k at N+k, lam_k at 2N+k (k=1..N)
  const auto xi = [](int k) { return k; };
  const auto yi = [N](int k) { return N + k; };
  const auto li = [N](int k) { return 2 * N + k; };

  Vector qdiag = Vector::Constant(p.n, kAuxDiag);
  for (int k = 0; k < N; ++k) qdiag(xi(k)) = 2.0 * h;
  qdiag(xi(N)) = 2.0;
  p.Q = qdiag.asDiagonal();
  p.g = Vector::Zero(p.n);
  p.g(xi(N)) = -10.0 / 3.0;
  p.objective_constant = 25.0 / 9.0;

  p.A = Matrix::Zero(N, p.n);
  p.ell_A = Vector::Constant(N, 3.0 * h);
  p.u_A = p.ell_A;
  for (int k = 1; k <= N; ++k) {
    p.A(k - 1, xi(k)) = 1.0;
    p.A(k - 1, xi(k - 1)) = -1.0;
    p.A(k - 1, yi(k)) = 2.0 * h;
  }

  p.L = Matrix::Zero(p.n_c, p.n);
  p.R = Matrix::Zero(p.n_c, p.n);
  p.ell_L = Vector::Zero(p.n_c);
  p.ell_R = Vector::Zero(p.n_c);
  for (int k = 1; k <= N; ++k) {
    // x_k + lam_k >= 0  perp  1 - y_k >= 0
    p.L(k - 1, xi(k)) = 1.0;
    p.L(k - 1, li(k)) = 1.0;
    p.R(k - 1, yi(k)) = -1.0;
    p.ell_R(k - 1) = -1.0;
    // lam_k >= 0  perp  y_k >= 0
    p.L(N + k - 1, li(k)) = 1.0;
    p.R(N + k - 1, yi(k)) = 1.0;
  }

  clear_bounds(p);
  Vector guess = Vector::Zero(p.n);
  guess(0) = spec.x0_guess;
  p.initial_guess = guess;
  return p;
}

Vector ivocp_guess_grid() {
  Vector g(10);
  for (int i = 0; i < 10; ++i) g(i) = -1.9 + i * (1.0 / 9.0);
  return g;
}

LcqpProblem gen_moving_masses(const MovingMassesSpec& spec) {
  if (spec.s < 1) throw std::invalid_argument("masses: s must be >= 1");
  if (spec.N < 1) throw std::invalid_argument("masses: N must be >= 1");
  if (!(spec.T > 0.0)) throw std::invalid_argument("masses: T must be > 0");
  const int s = spec.s, N = spec.N;
  const int ns = 2 * s;
  if (spec.x0 && spec.x0->size() != ns)
    throw std::invalid_argument("masses: x0 must have 2s entries");
  const double h = spec.T / N;
  const double fric = 0.3;

  LcqpProblem p;
  p.n = (N + 1) * ns + N * (1 + 3 * s);
  p.n_A = 3 * s * N + 2 * s;
  p.n_c = 2 * s * N;

  // layout: states x_0..x_N (positions then velocities per node), then per
  // stage k=1..N the block (u, y_1..y_s, lamm_1..lamm_s, lamp_1..lamp_s)
  const auto pi = [ns](int k, int i) { return k * ns + i; };
  const auto vi = [ns, s](int k, int i) { return k * ns + s + i; };
  const int stage0 = (N + 1) * ns;
  const int stride = 1 + 3 * s;
  const auto ui = [=](int k) { return stage0 + (k - 1) * stride; };
  const auto yi = [=](int k, int i) { return stage0 + (k - 1) * stride + 1 + i; };
  const auto lmi = [=](int k, int i) {
    return stage0 + (k - 1) * stride + 1 + s + i;
  };
  const auto lpi = [=](int k, int i) {
    return stage0 + (k - 1) * stride + 1 + 2 * s + i;
  };

  Vector qdiag = Vector::Constant(p.n, kAuxDiag);
  for (int k = 1; k <= N; ++k) {
    for (int j = 0; j < ns; ++j) qdiag(k * ns + j) = 2.0 * h;
    qdiag(ui(k)) = 2.0 * h;
  }
  p.Q = qdiag.asDiagonal();
  p.g = Vector::Zero(p.n);
  p.objective_constant = 0.0;

  p.A = Matrix::Zero(p.n_A, p.n);
  p.ell_A = Vector::Zero(p.n_A);
  for (int k = 1; k <= N; ++k) {
    const int rb = 3 * s * (k - 1);
    for (int i = 0; i < s; ++i) {
      // p_k = p_{k-1} + h v_k
      p.A(rb + i, pi(k, i)) = 1.0;
      p.A(rb + i, pi(k - 1, i)) = -1.0;
      p.A(rb + i, vi(k, i)) = -h;
      // v_k = v_{k-1} + h (springs - v_k - fric (2 y_k - 1) [+ u_k])
      const int r = rb + s + i;
      p.A(r, vi(k, i)) = 1.0 + h;
      p.A(r, vi(k - 1, i)) = -1.0;
      p.A(r, yi(k, i)) = 2.0 * fric * h;
      if (i == 0) {
        p.A(r, pi(k, 0)) += h;  // wall spring -p_1
      } else {
        p.A(r, pi(k, i - 1)) -= h;  // left neighbor p_{i-1} - p_i
        p.A(r, pi(k, i)) += h;
      }
      if (i < s - 1) {
        p.A(r, pi(k, i + 1)) -= h;  // right neighbor p_{i+1} - p_i
        p.A(r, pi(k, i)) += h;
      } else {
        p.A(r, ui(k)) = -h;  // control acts on the last mass
      }
      p.ell_A(r) = fric * h;
      // lamp = v_k + lamm (positive-part split)
      const int rs = rb + 2 * s + i;
      p.A(rs, lpi(k, i)) = 1.0;
      p.A(rs, lmi(k, i)) = -1.0;
      p.A(rs, vi(k, i)) = -1.0;
    }
  }
  for (int j = 0; j < ns; ++j) p.A(3 * s * N + j, N * ns + j) = 1.0;  // x_N = 0
  p.u_A = p.ell_A;

  p.L = Matrix::Zero(p.n_c, p.n);
  p.R = Matrix::Zero(p.n_c, p.n);
  p.ell_L = Vector::Zero(p.n_c);
  p.ell_R = Vector::Zero(p.n_c);
  for (int k = 1; k <= N; ++k) {
    const int cb = 2 * s * (k - 1);
    for (int i = 0; i < s; ++i) {
      // lamp >= 0  perp  1 - y >= 0
      p.L(cb + i, lpi(k, i)) = 1.0;
      p.R(cb + i, yi(k, i)) = -1.0;
      p.ell_R(cb + i) = -1.0;
      // lamm >= 0  perp  y >= 0
      p.L(cb + s + i, lmi(k, i)) = 1.0;
      p.R(cb + s + i, yi(k, i)) = 1.0;
    }
  }

  clear_bounds(p);
  Vector x0 = spec.x0 ? *spec.x0 : Vector::Zero(ns);
  if (!spec.x0) x0.head(s).setOnes();  // positions 1, at rest
  for (int j = 0; j < ns; ++j) p.ell_x(j) = p.u_x(j) = x0(j);
  Vector guess = Vector::Zero(p.n);
  guess.head(ns) = x0;
  p.initial_guess = guess;
  return p;
}

LcqpProblem gen_integer_qp(const IntegerQpSpec& spec) {
  if (spec.bits < 1 || spec.bits > 62)
    throw std::invalid_argument("integer qp: bits must be in 1..62");
  const int nb = spec.bits;

  LcqpProblem p;
  p.n = 1 + nb;
  p.n_A = 1;
  p.n_c = nb;

  Vector qdiag = Vector::Constant(p.n, kAuxDiag);
  qdiag(0) = 2.0;
  p.Q = qdiag.asDiagonal();
  p.g = Vector::Zero(p.n);
  p.g(0) = -2.0 * spec.target;
  p.objective_constant = spec.target * spec.target;

  // z = sum_i 2^{i-1} b_i
  p.A = Matrix::Zero(1, p.n);
  p.A(0, 0) = 1.0;
  for (int i = 1; i <= nb; ++i) p.A(0, i) = -std::ldexp(1.0, i - 1);
  p.ell_A = Vector::Zero(1);
  p.u_A = p.ell_A;

  // b_i >= 0  perp  1 - b_i >= 0
  p.L = Matrix::Zero(nb, p.n);
  p.R = Matrix::Zero(nb, p.n);
  p.ell_L = Vector::Zero(nb);
  p.ell_R = Vector::Constant(nb, -1.0);
  for (int i = 1; i <= nb; ++i) {
    p.L(i - 1, i) = 1.0;
    p.R(i - 1, i) = -1.0;
  }

  clear_bounds(p);
  if (spec.midpoint_guess) {
    Vector guess = Vector::Constant(p.n, 0.5);
    guess(0) = 0.5 * (std::ldexp(1.0, nb) - 1.0);
    p.initial_guess = guess;
  }
  return p;
}

ProfileResult performance_profile(const Matrix& seconds,
                                  const Vector& tau_grid) {
  const auto P = seconds.rows(), S = seconds.cols();
  if (P < 1 || S < 1)
    throw std::invalid_argument("profile: empty timing table");
  const auto succeeded = [](double t) { return std::isfinite(t) && t > 0.0; };

  ProfileResult out;
  out.tau = tau_grid;
  out.ratios = Matrix::Constant(P, S, kInf);
  for (Eigen::Index pr = 0; pr < P; ++pr) {
    double best = kInf;
    for (Eigen::Index sv = 0; sv < S; ++sv)
      if (succeeded(seconds(pr, sv))) best = std::min(best, seconds(pr, sv));
    if (!std::isfinite(best)) continue;  // nobody solved it: all ratios stay inf
    for (Eigen::Index sv = 0; sv < S; ++sv)
      if (succeeded(seconds(pr, sv))) out.ratios(pr, sv) = seconds(pr, sv) / best;
  }

  out.fraction = Matrix::Zero(tau_grid.size(), S);
  for (Eigen::Index t = 0; t < tau_grid.size(); ++t)
    for (Eigen::Index sv = 0; sv < S; ++sv) {
      int count = 0;
      for (Eigen::Index pr = 0; pr < P; ++pr)
        if (out.ratios(pr, sv) <= tau_grid(t)) ++count;
      out.fraction(t, sv) = static_cast<double>(count) / static_cast<double>(P);
    }
  return out;
}

}  // namespace lcqp
