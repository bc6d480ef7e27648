// Command-line front end. Links the C API only; all numerics live behind it.
//
// Subcommands: solve, gen, bench, verify. Machine-readable results go to
// standard output as one JSON document; iterate logs and diagnostics go to
// standard error. Exit codes for solve: 0 solved, 2 penalty budget
// exhausted, 3 iteration budget exhausted, 4 subproblem failure, 1 bad
// input. verify exits 0 when every check passes, 2 when a check fails,
// 1 on bad input.

#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcqp.h"

using nlohmann::json;

namespace {

// ---- small RAII wrappers over the C handles -------------------------------

struct ProblemDeleter {
  void operator()(lcqp_problem* p) const { lcqp_problem_free(p); }
};
struct OptionsDeleter {
  void operator()(lcqp_options* o) const { lcqp_options_free(o); }
};
struct SolutionDeleter {
  void operator()(lcqp_solution* s) const { lcqp_solution_free(s); }
};
using ProblemPtr = std::unique_ptr<lcqp_problem, ProblemDeleter>;
using OptionsPtr = std::unique_ptr<lcqp_options, OptionsDeleter>;
using SolutionPtr = std::unique_ptr<lcqp_solution, SolutionDeleter>;

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  std::exit(1);
}

// ---- solver option flags ---------------------------------------------------

// One entry per library option; only flags the user actually set are
// forwarded, so defaults have a single home in the library.
struct OptionFlags {
  std::vector<std::pair<std::string, double>> set_values;

  void add_to(CLI::App* cmd) {
    const auto flag = [this, cmd](const std::string& name,
                                  const std::string& help) {
      auto* opt = cmd->add_option_function<double>(
          "--" + name,
          [this, name](double v) { set_values.emplace_back(name, v); }, help);
      if (name == "seed") opt->envname("LCQP_SEED");
    };
    flag("stat-tol", "stationarity tolerance of the inner loop");
    flag("comp-tol", "complementarity tolerance for declaring success");
    flag("rho0", "initial penalty parameter");
    flag("beta", "penalty growth factor (> 1)");
    flag("zero-penalty-first", "1: start from the penalty-free relaxation");
    flag("max-iter", "budget counted in QP subproblem solves");
    flag("max-penalty", "stop once the penalty parameter exceeds this");
    flag("print-level", "0 silent, 1 outer lines, 2 every iterate (stderr)");
    flag("n-dynamic", "history length of the early penalty update; 0 = off");
    flag("eta-dynamic", "required complementarity decrease factor in (0,1)");
    flag("perturb-scale", "relative scale of the gradient perturbation");
    flag("seed", "perturbation seed (env fallback LCQP_SEED)");
  }

  OptionsPtr build(int force_print_level = -1) const {
    OptionsPtr o(lcqp_options_create());
    if (!o) die("out of memory");
    for (const auto& [name, value] : set_values)
      if (lcqp_options_set(o.get(), name.c_str(), value) != LCQP_OK)
        die(lcqp_last_error());
    if (force_print_level >= 0)
      lcqp_options_set(o.get(), "print-level", force_print_level);
    return o;
  }
};

// ---- shared helpers --------------------------------------------------------

double wall_seconds(const std::chrono::steady_clock::time_point& a,
                    const std::chrono::steady_clock::time_point& b) {
  return std::chrono::duration<double>(b - a).count();
}

int status_exit_code(int status) {
  switch (status) {
    case LCQP_STATUS_SOLVED: return 0;
    case LCQP_STATUS_MAX_PENALTY: return 2;
    case LCQP_STATUS_MAX_ITERATIONS: return 3;
    default: return 4;
  }
}

json solution_record(const lcqp_problem* p, const lcqp_solution* s,
                     double seconds, bool emit_x) {
  json rec;
  rec["status"] = lcqp_solution_status_name(s);
  rec["exit_code"] = status_exit_code(lcqp_solution_status(s));
  rec["objective"] = lcqp_solution_objective(s);
  rec["phi"] = lcqp_solution_phi(s);
  rec["stationarity"] = lcqp_solution_stationarity(s);
  rec["penalty_final"] = lcqp_solution_penalty(s);
  rec["outer_iterations"] = lcqp_solution_outer_iterations(s);
  rec["iterations"] = lcqp_solution_iterations(s);
  rec["wall_time_s"] = seconds;
  rec["message"] = lcqp_solution_message(s);
  if (emit_x) {
    const int n = lcqp_problem_n(p);
    const int n_c = lcqp_problem_nc(p);
    const int n_A = lcqp_problem_na(p);
    std::vector<double> x(n);
    if (lcqp_solution_get_x(s, x.data()) == LCQP_OK) rec["x"] = x;
    std::vector<double> yL(n_c), yR(n_c), yA(n_A), yx(n);
    if (lcqp_solution_get_duals(s, yL.data(), yR.data(), yA.data(),
                                yx.data()) == LCQP_OK)
      rec["duals"] = {{"y_L", yL}, {"y_R", yR}, {"y_A", yA}, {"y_x", yx}};
  }
  return rec;
}

ProblemPtr load_and_validate(const std::string& path) {
  ProblemPtr p(lcqp_problem_load(path.c_str()));
  if (!p) die(lcqp_last_error());
  if (lcqp_problem_validate(p.get()) != LCQP_OK) die(lcqp_last_error());
  return p;
}

// ---- solve -----------------------------------------------------------------

int cmd_solve(const std::string& file, const OptionFlags& flags, bool emit_x,
              const std::string& emit_solution) {
  ProblemPtr p = load_and_validate(file);
  OptionsPtr o = flags.build();

  const auto t0 = std::chrono::steady_clock::now();
  SolutionPtr s(lcqp_solve(p.get(), o.get()));
  const auto t1 = std::chrono::steady_clock::now();
  if (!s) die(lcqp_last_error());

  if (!emit_solution.empty() &&
      lcqp_solution_save(s.get(), emit_solution.c_str()) != LCQP_OK)
    die(lcqp_last_error());

  std::cout << solution_record(p.get(), s.get(), wall_seconds(t0, t1), emit_x)
                   .dump(2)
            << "\n";
  return status_exit_code(lcqp_solution_status(s.get()));
}

// ---- gen -------------------------------------------------------------------

struct GenParams {
  int N = 50, s = 2, bits = 3;
  double x0 = -1.0, T = 2.0, target = 2.3;
};

int cmd_gen(const std::string& family, const GenParams& gp,
            const std::string& out) {
  ProblemPtr p;
  if (family == "toy") p.reset(lcqp_gen_toy());
  else if (family == "ivocp") p.reset(lcqp_gen_ivocp(gp.N, gp.x0));
  else if (family == "masses") p.reset(lcqp_gen_masses(gp.s, gp.N, gp.T));
  else if (family == "intqp") p.reset(lcqp_gen_intqp(gp.bits, gp.target));
  else die("unknown family '" + family + "' (toy, ivocp, masses, intqp)");
  if (!p) die(lcqp_last_error());
  if (lcqp_problem_validate(p.get()) != LCQP_OK) die(lcqp_last_error());
  if (lcqp_problem_save(p.get(), out.c_str()) != LCQP_OK)
    die(lcqp_last_error());
  std::cerr << "wrote " << out << " (n=" << lcqp_problem_n(p.get())
            << ", n_c=" << lcqp_problem_nc(p.get())
            << ", n_A=" << lcqp_problem_na(p.get()) << ")\n";
  return 0;
}

// ---- bench -----------------------------------------------------------------

struct BenchRun {
  std::string problem;
  double param1 = 0.0, param2 = 0.0;  // (N, x0 guess) or (N, T)
};

struct RunResult {
  int status = LCQP_STATUS_SUBPROBLEM_FAILURE;
  double seconds = -1.0, objective = 0.0, phi = 0.0;
  int iterations = 0;
};

// Option variants compared by the profile; each is the library default plus
// one switch, so the profile isolates that switch's effect.
const std::vector<std::pair<std::string, std::pair<std::string, double>>>
    kVariants = {
        {"default", {"", 0.0}},
        {"no-dynamic", {"n-dynamic", 0.0}},
        {"no-zero-first", {"zero-penalty-first", 0.0}},
};

ProblemPtr make_bench_problem(const std::string& suite, const BenchRun& run) {
  ProblemPtr p(suite == "ivocp"
                   ? lcqp_gen_ivocp(static_cast<int>(run.param1), run.param2)
                   : lcqp_gen_masses(2, static_cast<int>(run.param1),
                                     run.param2));
  if (!p) die(lcqp_last_error());
  return p;
}

std::vector<BenchRun> bench_grid(const std::string& suite) {
  std::vector<BenchRun> runs;
  for (int N = 50; N <= 100; N += 5) {
    for (int i = 0; i < 10; ++i) {
      BenchRun r;
      r.param1 = N;
      if (suite == "ivocp") {
        r.param2 = -1.9 + i * (1.0 / 9.0);  // ten equidistant guesses
        r.problem = "ivocp-N" + std::to_string(N) + "-g" + std::to_string(i);
      } else {
        r.param2 = 2.0 + i * (2.0 / 9.0);  // horizons from 2 to 4
        r.problem = "masses-N" + std::to_string(N) + "-t" + std::to_string(i);
      }
      runs.push_back(std::move(r));
    }
  }
  return runs;
}

int cmd_bench(const std::string& suite, const std::string& out_dir, int jobs,
              int limit, const OptionFlags& flags) {
  if (suite != "ivocp" && suite != "masses")
    die("unknown suite '" + suite + "' (ivocp, masses)");
  std::vector<BenchRun> runs = bench_grid(suite);
  if (limit > 0 && static_cast<int>(runs.size()) > limit) runs.resize(limit);

  const int S = static_cast<int>(kVariants.size());
  const int P = static_cast<int>(runs.size());
  std::vector<RunResult> results(static_cast<size_t>(P) * S);

  std::atomic<int> next{0};
  const auto worker = [&] {
    for (int idx; (idx = next.fetch_add(1)) < P * S;) {
      const int pi = idx / S, si = idx % S;
      ProblemPtr prob = make_bench_problem(suite, runs[pi]);
      OptionsPtr opts = flags.build(/*force_print_level=*/0);
      const auto& sw = kVariants[si].second;
      if (!sw.first.empty())
        lcqp_options_set(opts.get(), sw.first.c_str(), sw.second);

      const auto t0 = std::chrono::steady_clock::now();
      SolutionPtr sol(lcqp_solve(prob.get(), opts.get()));
      const auto t1 = std::chrono::steady_clock::now();
      if (!sol) die(lcqp_last_error());

      RunResult& r = results[idx];
      r.status = lcqp_solution_status(sol.get());
      r.seconds = wall_seconds(t0, t1);
      r.objective = lcqp_solution_objective(sol.get());
      r.phi = lcqp_solution_phi(sol.get());
      r.iterations = lcqp_solution_iterations(sol.get());
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  // Failures enter the profile as the failure marker (-1).
  std::vector<double> seconds(static_cast<size_t>(P) * S);
  for (int i = 0; i < P * S; ++i)
    seconds[i] =
        results[i].status == LCQP_STATUS_SOLVED ? results[i].seconds : -1.0;

  const int n_tau = 61;
  std::vector<double> tau(n_tau);
  for (int j = 0; j < n_tau; ++j) tau[j] = std::pow(2.0, j / 10.0);
  std::vector<double> fraction(static_cast<size_t>(n_tau) * S);
  if (lcqp_performance_profile(seconds.data(), P, S, tau.data(), n_tau,
                               nullptr, fraction.data()) != LCQP_OK)
    die(lcqp_last_error());

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const std::string profile_path = out_dir + "/profile.csv";
  const std::string runs_path = out_dir + "/runs.csv";
  std::ofstream prof(profile_path);
  if (!prof) die("cannot write " + profile_path);
  prof << "tau";
  for (const auto& v : kVariants) prof << "," << v.first;
  prof << "\n";
  char buf[64];
  for (int j = 0; j < n_tau; ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", tau[j]);
    prof << buf;
    for (int si = 0; si < S; ++si) {
      std::snprintf(buf, sizeof(buf), "%.17g", fraction[j * S + si]);
      prof << "," << buf;
    }
    prof << "\n";
  }

  std::ofstream rcsv(runs_path);
  if (!rcsv) die("cannot write " + runs_path);
  rcsv << "problem," << (suite == "ivocp" ? "N,x0_guess" : "N,T")
       << ",solver,status,seconds,objective,phi,iterations\n";
  for (int pi = 0; pi < P; ++pi)
    for (int si = 0; si < S; ++si) {
      const RunResult& r = results[pi * S + si];
      rcsv << runs[pi].problem << "," << runs[pi].param1 << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", runs[pi].param2);
      rcsv << buf << "," << kVariants[si].first << ",";
      rcsv << (r.status == LCQP_STATUS_SOLVED ? "solved" : "failed") << ",";
      std::snprintf(buf, sizeof(buf), "%.6e", r.seconds);
      rcsv << buf << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", r.objective);
      rcsv << buf << ",";
      std::snprintf(buf, sizeof(buf), "%.17g", r.phi);
      rcsv << buf << "," << r.iterations << "\n";
    }

  json summary;
  summary["suite"] = suite;
  summary["problems"] = P;
  summary["profile_csv"] = profile_path;
  summary["runs_csv"] = runs_path;
  json solved;
  for (int si = 0; si < S; ++si) {
    int count = 0;
    for (int pi = 0; pi < P; ++pi)
      count += results[pi * S + si].status == LCQP_STATUS_SOLVED;
    solved[kVariants[si].first] = count;
  }
  summary["solved"] = solved;
  std::cout << summary.dump(2) << "\n";
  return 0;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const std::string& problem_file, const std::string& solution_file,
               double tol) {
  ProblemPtr p = load_and_validate(problem_file);
  const int n = lcqp_problem_n(p.get());
  const int n_c = lcqp_problem_nc(p.get());
  const int n_A = lcqp_problem_na(p.get());

  // One slot minimum: empty dual blocks still need non-null buffers.
  std::vector<double> x(n), yL(std::max(n_c, 1)), yR(std::max(n_c, 1)),
      yA(std::max(n_A, 1)), yx(n);
  int has_duals = 0;
  if (lcqp_solution_file_load(solution_file.c_str(), n, n_c, n_A, x.data(),
                              yL.data(), yR.data(), yA.data(), yx.data(),
                              &has_duals) != LCQP_OK)
    die(lcqp_last_error());

  json rep;
  rep["objective"] = lcqp_problem_eval_objective(p.get(), x.data());
  rep["phi"] = lcqp_problem_eval_phi(p.get(), x.data());
  rep["max_violation"] = lcqp_problem_eval_violation(p.get(), x.data());
  rep["has_duals"] = has_duals != 0;

  bool ok;
  if (has_duals) {
    lcqp_verify_report vr;
    if (lcqp_verify(p.get(), x.data(), yL.data(), yR.data(), yA.data(),
                    yx.data(), tol, &vr) != LCQP_OK)
      die(lcqp_last_error());
    rep["feasible"] = vr.feasible != 0;
    rep["complementary"] = vr.complementary != 0;
    rep["gradient_ok"] = vr.gradient_ok != 0;
    rep["signs_ok"] = vr.signs_ok != 0;
    rep["gradient_residual"] = vr.gradient_residual;
    rep["worst_sign_violation"] = vr.worst_sign_violation;
    const double bound =
        lcqp_penalty_bound(p.get(), x.data(), yL.data(), yR.data());
    if (std::isinf(bound)) rep["penalty_bound"] = "inf";
    else rep["penalty_bound"] = bound;
    ok = vr.feasible && vr.complementary && vr.gradient_ok && vr.signs_ok;
  } else {
    // No duals in the file: point checks only.
    const double t = tol > 0 ? tol : 1e-6;
    const bool feasible = rep["max_violation"].get<double>() <= t;
    const bool complementary = rep["phi"].get<double>() <= t;
    rep["feasible"] = feasible;
    rep["complementary"] = complementary;
    ok = feasible && complementary;
  }
  rep["ok"] = ok;
  std::cout << rep.dump(2) << "\n";
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LCQP solver: penalty homotopy for quadratic programs with "
               "linear complementarity constraints"};
  app.set_version_flag("--version", []() { return lcqp_version(); });
  app.require_subcommand(1);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve a problem file");
  std::string solve_file;
  solve_cmd->add_option("file", solve_file, "problem file")->required();
  OptionFlags solve_flags;
  solve_flags.add_to(solve_cmd);
  bool emit_x = false;
  std::string emit_solution;
  solve_cmd->add_flag("--emit-x", emit_x, "include x and duals in the record");
  solve_cmd->add_option("--emit-solution", emit_solution,
                        "write point and duals to this solution file");

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a benchmark problem");
  std::string family, gen_out;
  GenParams gp;
  gen_cmd->add_option("family", family, "toy | ivocp | masses | intqp")
      ->required();
  gen_cmd->add_option("-o,--out", gen_out, "output problem file")->required();
  gen_cmd->add_option("--N", gp.N, "stage count (ivocp, masses)");
  gen_cmd->add_option("--x0", gp.x0, "initial-value guess (ivocp)");
  gen_cmd->add_option("--s", gp.s, "number of masses (masses)");
  gen_cmd->add_option("--T", gp.T, "horizon length (masses)");
  gen_cmd->add_option("--bits", gp.bits, "binary digits (intqp)");
  gen_cmd->add_option("--target", gp.target, "target value (intqp)");

  // bench
  auto* bench_cmd =
      app.add_subcommand("bench", "run a benchmark suite and emit CSVs");
  std::string suite, out_dir = ".";
  int jobs = 1, limit = 0;
  bench_cmd->add_option("suite", suite, "ivocp | masses")->required();
  bench_cmd->add_option("--out-dir", out_dir, "directory for the CSV files");
  bench_cmd->add_option("--jobs", jobs,
                        "worker threads (1 gives clean timings; more adds "
                        "scheduling noise to the clock)")
      ->check(CLI::Range(1, 256));
  bench_cmd->add_option("--limit", limit, "truncate the run grid (testing)");
  OptionFlags bench_flags;
  bench_flags.add_to(bench_cmd);

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "check a solution file against its problem");
  std::string vproblem, vsolution;
  double vtol = 0.0;
  verify_cmd->add_option("problem", vproblem, "problem file")->required();
  verify_cmd->add_option("solution", vsolution, "solution file")->required();
  verify_cmd->add_option("--tol", vtol, "verification tolerance");

  CLI11_PARSE(app, argc, argv);

  if (solve_cmd->parsed())
    return cmd_solve(solve_file, solve_flags, emit_x, emit_solution);
  if (gen_cmd->parsed()) return cmd_gen(family, gp, gen_out);
  if (bench_cmd->parsed())
    return cmd_bench(suite, out_dir, jobs, limit, bench_flags);
  if (verify_cmd->parsed()) return cmd_verify(vproblem, vsolution, vtol);
  return 1;
}
