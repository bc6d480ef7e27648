#pragma once

#include <optional>

#include "lcqp/problem.hpp"
#include "lcqp/types.hpp"

namespace lcqp {

// Two-variable warm-up problem: min |x - (1,1)|^2 with x1 >= 0 perp x2 >= 0.
// Strongly stationary minima (1,0) and (0,1), objective value 1 (constant 2
// included); the diagonal carries a trajectory of penalty saddle points at
// (2/(2+rho), 2/(2+rho)).
LcqpProblem gen_toy();

// Initial-value selection for a scalar piecewise dynamic with one switch:
//   min  sum_{k=0}^{N-1} h x_k^2 + (x_N - 5/3)^2
//   s.t. x_k - x_{k-1} + 2h y_k = 3h
//        0 <= x_k + lam_k  perp  1 - y_k >= 0
//        0 <= lam_k        perp  y_k     >= 0      (k = 1..N)
// over a horizon of 2 split into N implicit-Euler steps (h = 2/N). The rate
// is 3 while x < 0 and 1 while x > 0; y plays the switch indicator. Variable
// layout (x_0..x_N, y_1..y_N, lam_1..lam_N): n = 3N+1, n_A = N, n_c = 2N.
struct IvocpSpec {
  int N = 50;
  double x0_guess = -1.0;  // installed as the x_0 entry of the initial guess
};
LcqpProblem gen_ivocp(const IvocpSpec& spec);

// Benchmark sweep used with the IVOCP family: ten equidistant initial-value
// guesses from -1.9 to -0.9.
Vector ivocp_guess_grid();

// Chain of s spring-coupled masses with Coulomb ground friction, driven to
// rest by a force u on the last mass:
//   min  sum_k h (x_k'x_k + u_k^2)
//   s.t. implicit-Euler rows for  p' = v,
//        v_i' = springs_i - v_i - 0.3 (2 y_i - 1) (+ u on the last mass),
//        lamp = v + lamm   (positive-part split, one row per contact)
//        0 <= lamp perp 1 - y >= 0,   0 <= lamm perp y >= 0,
//        x_0 pinned by equal box bounds, x_N = 0 as terminal equalities.
// Variable layout: states x_0..x_N (each 2s: positions then velocities),
// then per stage k=1..N the block (u_k, y_k in R^s, lamm_k in R^s,
// lamp_k in R^s). Dimensions: n = (N+1) 2s + N (1+3s), n_A = 3sN + 2s,
// n_c = 2sN; at s=2 that is n = 11N+4 (554 at N=50, 1104 at N=100).
struct MovingMassesSpec {
  int s = 2;
  int N = 50;
  double T = 2.0;
  // Initial state (positions, velocities); default: all positions 1, at rest.
  std::optional<Vector> x0;
};
LcqpProblem gen_moving_masses(const MovingMassesSpec& spec);

// Scalar integer least squares  min (z - target)^2  with z coupled to its
// binary digits by  z = sum_i 2^{i-1} b_i  and each digit forced binary by
// 0 <= b_i perp 1 - b_i >= 0. Variable layout (z, b_1..b_bits). When
// midpoint_guess is set, the initial guess starts every digit at 1/2 (the
// point farthest from both feasible values, so the first linearization does
// not prefer either digit) with z matching the coupling row.
struct IntegerQpSpec {
  int bits = 3;
  double target = 2.3;
  bool midpoint_guess = true;
};
LcqpProblem gen_integer_qp(const IntegerQpSpec& spec);

// Performance profile over a (problems x solvers) table of wall times in
// seconds. Entries that are nonpositive or not finite mean the run failed.
// ratio(p, s) = time(p, s) / fastest successful time on problem p (infinite
// for failures and on problems nobody solved); fraction(t, s) = share of
// problems with ratio(p, s) <= tau_grid(t).
struct ProfileResult {
  Vector tau;
  Matrix ratios;    // problems x solvers
  Matrix fraction;  // tau grid x solvers, each column nondecreasing in [0,1]
};
ProfileResult performance_profile(const Matrix& seconds, const Vector& tau_grid);

}  // namespace lcqp
