#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "lcqp/problem.hpp"
#include "lcqp/solver.hpp"

namespace lcqp {

// Line-oriented problem files.
//
//   # full-line comments and blank lines are skipped
//   lcqp 1
//   dimensions <n> <n_c> <n_A>
//   objective_constant <value>
//   Q                 <- matrix sections: one text line per row
//   <n lines of n entries>
//   g                 <- vector sections: one line with all entries
//   <n entries>
//   L / ell_L / u_L / R / ell_R / u_R     (present when n_c > 0)
//   A / ell_A / u_A                       (present when n_A > 0)
//   ell_x / u_x
//   x0                                    (optional initial guess)
//
// Numbers are written with 17 significant digits, so parse(serialize(p))
// reproduces every finite entry bit-exactly. Infinite bounds use the tokens
// "inf" and "-inf". Omitted bound sections default to the full line
// (-inf, inf); ell_L and ell_R are mandatory whenever n_c > 0. Sections may
// appear in any order after "dimensions", each at most once.

// Parse failure with a 1-based line number; what() includes it.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

std::string serialize_problem(const LcqpProblem& p);
LcqpProblem parse_problem(std::istream& in);
LcqpProblem parse_problem(const std::string& text);

// File wrappers; throw ParseError on malformed content and
// std::runtime_error when the file cannot be opened or written.
void save_problem(const std::string& path, const LcqpProblem& p);
LcqpProblem load_problem(const std::string& path);

// Solution files carry a point and, all-or-nothing, the four dual blocks:
//
//   lcqp-solution 1
//   dimensions <n> <n_c> <n_A>
//   x
//   <n entries>
//   y_L / y_R / y_A / y_x                 (optional, jointly)
struct SolutionFile {
  int n = 0, n_c = 0, n_A = 0;
  Vector x;
  std::optional<DualBlocks> duals;
};

std::string serialize_solution(const SolutionFile& s);
SolutionFile parse_solution(std::istream& in);
SolutionFile parse_solution(const std::string& text);
void save_solution(const std::string& path, const SolutionFile& s);
SolutionFile load_solution(const std::string& path);

}  // namespace lcqp
