#include "lcqp/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace lcqp {
namespace {

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_vector(std::string& out, const std::string& name, const Vector& v) {
  out += name;
  out += '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += fmt(v[i]);
  }
  out += '\n';
}

void append_matrix(std::string& out, const std::string& name, const Matrix& m) {
  out += name;
  out += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ' ';
      out += fmt(m(r, c));
    }
    out += '\n';
  }
}

// Lines pre-split for 1-based diagnostics; '#' starts a full-line comment.
class Cursor {
 public:
  explicit Cursor(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) lines_.push_back(line);
  }

  // Next non-blank non-comment line split into tokens; false at the end.
  bool next(std::vector<std::string>& tokens, int& line_no) {
    while (pos_ < lines_.size()) {
      const std::string& raw = lines_[pos_++];
      std::istringstream ss(raw);
      tokens.clear();
      std::string tok;
      while (ss >> tok) tokens.push_back(tok);
      if (tokens.empty() || tokens[0][0] == '#') continue;
      line_no = static_cast<int>(pos_);
      return true;
    }
    return false;
  }

  int line() const { return static_cast<int>(pos_); }

 private:
  std::vector<std::string> lines_;
  size_t pos_ = 0;
};

double parse_number(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(s, &end);
  if (end != s + tok.size())
    throw ParseError(line, "not a number: '" + tok + "'");
  if (std::isnan(v)) throw ParseError(line, "nan is not a valid entry");
  return v;
}

long parse_int(const std::string& tok, int line) {
  const char* s = tok.c_str();
  char* end = nullptr;
  const long v = std::strtol(s, &end, 10);
  if (end != s + tok.size())
    throw ParseError(line, "not an integer: '" + tok + "'");
  return v;
}

Vector parse_vector_line(Cursor& cur, const std::string& name, int count) {
  // Zero-length sections own no data line (it would serialize blank and be
  // indistinguishable from spacing).
  if (count == 0) return Vector(0);
  std::vector<std::string> toks;
  int line = 0;
  if (!cur.next(toks, line))
    throw ParseError(cur.line(), "missing data line for section '" + name + "'");
  if (static_cast<int>(toks.size()) != count)
    throw ParseError(line, "section '" + name + "' expects " +
                               std::to_string(count) + " entries, got " +
                               std::to_string(toks.size()));
  Vector v(count);
  for (int i = 0; i < count; ++i) v[i] = parse_number(toks[i], line);
  return v;
}

Matrix parse_matrix(Cursor& cur, const std::string& name, int rows, int cols) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    m.row(r) = parse_vector_line(cur, name + " row " + std::to_string(r),
                                 cols).transpose();
  return m;
}

// Tracks which sections appeared; duplicates are structural errors.
class Seen {
 public:
  void mark(const std::string& name, int line) {
    if (!seen_.insert(name).second)
      throw ParseError(line, "duplicate section '" + name + "'");
  }
  bool has(const std::string& name) const { return seen_.count(name) > 0; }

 private:
  std::set<std::string> seen_;
};

}  // namespace

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

std::string serialize_problem(const LcqpProblem& p) {
  std::string out = "lcqp 1\n";
  out += "dimensions " + std::to_string(p.n) + ' ' + std::to_string(p.n_c) +
         ' ' + std::to_string(p.n_A) + '\n';
  out += "objective_constant " + fmt(p.objective_constant) + '\n';
  append_matrix(out, "Q", p.Q);
  append_vector(out, "g", p.g);
  if (p.n_c > 0) {
    append_matrix(out, "L", p.L);
    append_vector(out, "ell_L", p.ell_L);
    append_vector(out, "u_L", p.u_L);
    append_matrix(out, "R", p.R);
    append_vector(out, "ell_R", p.ell_R);
    append_vector(out, "u_R", p.u_R);
  }
  if (p.n_A > 0) {
    append_matrix(out, "A", p.A);
    append_vector(out, "ell_A", p.ell_A);
    append_vector(out, "u_A", p.u_A);
  }
  append_vector(out, "ell_x", p.ell_x);
  append_vector(out, "u_x", p.u_x);
  if (p.initial_guess) append_vector(out, "x0", *p.initial_guess);
  return out;
}

LcqpProblem parse_problem(std::istream& in) {
  Cursor cur(in);
  std::vector<std::string> toks;
  int line = 0;

  if (!cur.next(toks, line) || toks.size() != 2 || toks[0] != "lcqp" ||
      toks[1] != "1")
    throw ParseError(line ? line : 1, "expected header 'lcqp 1'");
  if (!cur.next(toks, line) || toks[0] != "dimensions")
    throw ParseError(line ? line : 1, "expected 'dimensions n n_c n_A'");
  if (toks.size() != 4)
    throw ParseError(line, "'dimensions' takes exactly three integers");
  LcqpProblem p;
  p.n = static_cast<int>(parse_int(toks[1], line));
  p.n_c = static_cast<int>(parse_int(toks[2], line));
  p.n_A = static_cast<int>(parse_int(toks[3], line));
  if (p.n < 1 || p.n_c < 0 || p.n_A < 0)
    throw ParseError(line, "dimensions must satisfy n >= 1, n_c, n_A >= 0");

  Seen seen;
  while (cur.next(toks, line)) {
    const std::string& name = toks[0];
    seen.mark(name, line);
    const bool scalar = name == "objective_constant";
    if (!scalar && toks.size() != 1)
      throw ParseError(line, "section '" + name + "' takes no inline values");
    if (name == "objective_constant") {
      if (toks.size() != 2)
        throw ParseError(line, "'objective_constant' takes one value");
      p.objective_constant = parse_number(toks[1], line);
    } else if (name == "Q") {
      p.Q = parse_matrix(cur, name, p.n, p.n);
    } else if (name == "g") {
      p.g = parse_vector_line(cur, name, p.n);
    } else if (name == "L" || name == "R") {
      (name == "L" ? p.L : p.R) = parse_matrix(cur, name, p.n_c, p.n);
    } else if (name == "ell_L" || name == "u_L" || name == "ell_R" ||
               name == "u_R") {
      Vector v = parse_vector_line(cur, name, p.n_c);
      if (name == "ell_L") p.ell_L = std::move(v);
      else if (name == "u_L") p.u_L = std::move(v);
      else if (name == "ell_R") p.ell_R = std::move(v);
      else p.u_R = std::move(v);
    } else if (name == "A") {
      p.A = parse_matrix(cur, name, p.n_A, p.n);
    } else if (name == "ell_A" || name == "u_A") {
      (name == "ell_A" ? p.ell_A : p.u_A) = parse_vector_line(cur, name, p.n_A);
    } else if (name == "ell_x" || name == "u_x" || name == "x0") {
      Vector v = parse_vector_line(cur, name, p.n);
      if (name == "ell_x") p.ell_x = std::move(v);
      else if (name == "u_x") p.u_x = std::move(v);
      else p.initial_guess = std::move(v);
    } else {
      throw ParseError(line, "unknown section '" + name + "'");
    }
  }

  for (const char* req : {"Q", "g"})
    if (!seen.has(req))
      throw ParseError(cur.line(), std::string("missing section '") + req + "'");
  if (p.n_c > 0)
    for (const char* req : {"L", "ell_L", "R", "ell_R"})
      if (!seen.has(req))
        throw ParseError(cur.line(),
                         std::string("missing section '") + req + "'");
  if (p.n_A > 0 && !seen.has("A"))
    throw ParseError(cur.line(), "missing section 'A'");

  // Absent bounds span the whole line; absent blocks get empty shapes with
  // the right column count so downstream code never branches on presence.
  if (p.n_c == 0) {
    p.L.resize(0, p.n);
    p.R.resize(0, p.n);
    p.ell_L.resize(0);
    p.ell_R.resize(0);
  }
  if (!seen.has("u_L")) p.u_L = Vector::Constant(p.n_c, kInf);
  if (!seen.has("u_R")) p.u_R = Vector::Constant(p.n_c, kInf);
  if (p.n_A == 0) p.A.resize(0, p.n);
  if (!seen.has("ell_A")) p.ell_A = Vector::Constant(p.n_A, -kInf);
  if (!seen.has("u_A")) p.u_A = Vector::Constant(p.n_A, kInf);
  if (!seen.has("ell_x")) p.ell_x = Vector::Constant(p.n, -kInf);
  if (!seen.has("u_x")) p.u_x = Vector::Constant(p.n, kInf);
  return p;
}

LcqpProblem parse_problem(const std::string& text) {
  std::istringstream in(text);
  return parse_problem(in);
}

void save_problem(const std::string& path, const LcqpProblem& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << serialize_problem(p);
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

LcqpProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return parse_problem(in);
}

std::string serialize_solution(const SolutionFile& s) {
  std::string out = "lcqp-solution 1\n";
  out += "dimensions " + std::to_string(s.n) + ' ' + std::to_string(s.n_c) +
         ' ' + std::to_string(s.n_A) + '\n';
  append_vector(out, "x", s.x);
  if (s.duals) {
    append_vector(out, "y_L", s.duals->y_L);
    append_vector(out, "y_R", s.duals->y_R);
    append_vector(out, "y_A", s.duals->y_A);
    append_vector(out, "y_x", s.duals->y_x);
  }
  return out;
}

SolutionFile parse_solution(std::istream& in) {
  Cursor cur(in);
  std::vector<std::string> toks;
  int line = 0;

  if (!cur.next(toks, line) || toks.size() != 2 || toks[0] != "lcqp-solution" ||
      toks[1] != "1")
    throw ParseError(line ? line : 1, "expected header 'lcqp-solution 1'");
  if (!cur.next(toks, line) || toks[0] != "dimensions" || toks.size() != 4)
    throw ParseError(line ? line : 1, "expected 'dimensions n n_c n_A'");
  SolutionFile s;
  s.n = static_cast<int>(parse_int(toks[1], line));
  s.n_c = static_cast<int>(parse_int(toks[2], line));
  s.n_A = static_cast<int>(parse_int(toks[3], line));
  if (s.n < 1 || s.n_c < 0 || s.n_A < 0)
    throw ParseError(line, "dimensions must satisfy n >= 1, n_c, n_A >= 0");

  Seen seen;
  DualBlocks d;
  while (cur.next(toks, line)) {
    const std::string& name = toks[0];
    seen.mark(name, line);
    if (toks.size() != 1)
      throw ParseError(line, "section '" + name + "' takes no inline values");
    if (name == "x") s.x = parse_vector_line(cur, name, s.n);
    else if (name == "y_L") d.y_L = parse_vector_line(cur, name, s.n_c);
    else if (name == "y_R") d.y_R = parse_vector_line(cur, name, s.n_c);
    else if (name == "y_A") d.y_A = parse_vector_line(cur, name, s.n_A);
    else if (name == "y_x") d.y_x = parse_vector_line(cur, name, s.n);
    else throw ParseError(line, "unknown section '" + name + "'");
  }
  if (!seen.has("x")) throw ParseError(cur.line(), "missing section 'x'");
  const int have = seen.has("y_L") + seen.has("y_R") + seen.has("y_A") +
                   seen.has("y_x");
  if (have == 4) s.duals = std::move(d);
  else if (have != 0)
    throw ParseError(cur.line(),
                     "dual sections y_L, y_R, y_A, y_x must appear together");
  return s;
}

SolutionFile parse_solution(const std::string& text) {
  std::istringstream in(text);
  return parse_solution(in);
}

void save_solution(const std::string& path, const SolutionFile& s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << serialize_solution(s);
  if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

SolutionFile load_solution(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return parse_solution(in);
}

}  // namespace lcqp
