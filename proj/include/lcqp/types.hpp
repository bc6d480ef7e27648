#pragma once

#include <Eigen/Dense>
#include <limits>

namespace lcqp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bounds with magnitude at or above this value are treated as absent: the
// corresponding one-sided constraint is never considered violated, blocking,
// or a working-set candidate.
inline constexpr double kBoundAbsent = 1e20;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline bool bound_absent(double b) { return std::abs(b) >= kBoundAbsent; }

}  // namespace lcqp
