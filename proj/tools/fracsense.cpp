// fracsense: sparse nonnegative recovery with the fraction-penalty NIT solver.
//
//   fracsense solve --matrix A.txt --rhs b.txt --a 5 --sparsity 20
//   fracsense lp --matrix A.txt --rhs b.txt
//   fracsense sweep --m 100 --n 256 --r 5:60:5 --trials 20 --a 5 --seed 42
//   fracsense prox-check --a 3 --lambda 0.25
//
// Exit codes: 0 success, 1 invalid input or arguments, 2 solver failure
// (prox-check: 2 when the deviation exceeds its tolerance).

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fracsense/errors.hpp"
#include "fracsense/harness.hpp"
#include "fracsense/json_io.hpp"
#include "fracsense/lp.hpp"
#include "fracsense/nit.hpp"
#include "fracsense/prox_oracle.hpp"
#include "fracsense/text_io.hpp"

namespace {

using namespace fracsense;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;

// Input problems (bad files, bad flag values) map to exit 1.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw InvalidInput("cannot open '" + output + "' for writing");
  out << text;
}

template <typename F>
auto load_input(F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InvalidInput(e.what());
  } catch (const std::runtime_error& e) {
    throw InvalidInput(e.what());
  }
}

unsigned threads_from_env() {
  const char* env = std::getenv("FRACSENSE_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) throw InvalidInput("FRACSENSE_THREADS must be a nonnegative integer");
  return static_cast<unsigned>(v);
}

struct SolveArgs {
  std::string matrix, rhs, x0, output;
  double a = 5.0;
  long sparsity = 0;
  std::optional<double> lambda;
  double epsilon = 0.01;
  double tol = 1e-8;
  int max_iter = 10000;
  bool no_trace = false;
};

int run_solve(const SolveArgs& args) {
  const Matrix A = load_input([&] { return load_matrix(args.matrix); });
  const Vector b = load_input([&] { return load_vector(args.rhs); });
  std::optional<Vector> x0;
  if (!args.x0.empty()) x0 = load_input([&] { return load_vector(args.x0); });
  if (A.rows() != b.size()) throw InvalidInput("rhs length does not match matrix rows");
  if (x0 && x0->size() != A.cols()) throw InvalidInput("x0 length does not match matrix columns");

  SolverConfig<double> cfg;
  cfg.a = args.a;
  cfg.sparsity = args.sparsity;
  cfg.epsilon = args.epsilon;
  cfg.tol = args.tol;
  cfg.max_iter = args.max_iter;
  cfg.lambda_override = args.lambda;
  cfg.record_trace = !args.no_trace;
  try {
    cfg.validate(A.cols());
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }

  const SolveReport<double> report = solve(A, b, cfg, x0);
  emit(args.output, to_json(report).dump(2) + "\n");
  return kExitOk;
}

struct LpArgs {
  std::string matrix, rhs, output;
  double feas_tol = kDefaultFeasTol;
};

int run_lp(const LpArgs& args) {
  const Matrix A = load_input([&] { return load_matrix(args.matrix); });
  const Vector b = load_input([&] { return load_vector(args.rhs); });
  if (A.rows() != b.size()) throw InvalidInput("rhs length does not match matrix rows");
  const LpSolution sol = solve_lp(A, b, args.feas_tol);
  emit(args.output, to_json(sol).dump(2) + "\n");
  return kExitOk;
}

struct SweepArgs {
  long m = 100, n = 256;
  std::string range = "5:60:5";
  int trials = 100;
  std::vector<double> a_values{1, 3, 5, 7, 30, 100};
  std::uint64_t seed = 42;
  double success_re = 1e-4;
  double epsilon = 0.01;
  double tol = 1e-8;
  int max_iter = 10000;
  bool no_lp = false;
  bool timing = false;
  std::string output;
};

int run_sweep_cmd(const SweepArgs& args) {
  TrialSpec spec;
  spec.m = args.m;
  spec.n = args.n;
  spec.n_trials = args.trials;
  spec.a_values = args.a_values;
  spec.include_lp = !args.no_lp;
  spec.seed = RngSeed{args.seed};
  spec.success_re = args.success_re;
  spec.epsilon = args.epsilon;
  spec.tol = args.tol;
  spec.max_iter = args.max_iter;
  spec.record_timing = args.timing;
  spec.threads = threads_from_env();
  try {
    spec.sparsities = parse_range(args.range);
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }

  std::ostringstream csv;
  write_csv(csv, aggregate(run_sweep(spec)));
  emit(args.output, csv.str());
  return kExitOk;
}

struct ProxCheckArgs {
  double a = 3.0;
  double lambda = 0.25;
  double v_min = -5.0, v_max = 5.0, step = 0.01;
  double max_dev = 1e-5;
};

int run_prox_check(const ProxCheckArgs& args) {
  ProxCheckReport rep;
  try {
    rep = check_prox_against_oracle(args.a, args.lambda, args.v_min, args.v_max, args.step);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  std::printf("prox-check a=%g lambda=%g points=%d max_deviation=%.3e (at v=%g) "
              "max_objective_excess=%.3e tolerance=%.1e %s\n",
              args.a, args.lambda, rep.points, rep.max_deviation, rep.worst_v,
              rep.max_objective_excess, args.max_dev,
              rep.max_deviation <= args.max_dev ? "PASS" : "FAIL");
  return rep.max_deviation <= args.max_dev ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse nonnegative recovery with the fraction-penalty NIT solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Run NIT on A x = b and print a JSON report");
  solve_cmd->add_option("--matrix", solve_args.matrix, "Matrix file (text format)")->required();
  solve_cmd->add_option("--rhs", solve_args.rhs, "Right-hand side vector file")->required();
  solve_cmd->add_option("--x0", solve_args.x0, "Initial iterate vector file (default: zero)");
  solve_cmd->add_option("--a", solve_args.a, "Fraction penalty shape a")->capture_default_str();
  solve_cmd->add_option("--sparsity", solve_args.sparsity,
                        "Target sparsity r for the adaptive lambda (1 <= r < n; required unless --lambda)");
  solve_cmd->add_option("--lambda", solve_args.lambda, "Fixed lambda (disables the adaptive schedule)");
  solve_cmd->add_option("--epsilon", solve_args.epsilon, "Step-size margin: mu = (1-epsilon)/||A||^2")
      ->capture_default_str();
  solve_cmd->add_option("--tol", solve_args.tol, "Relative-change stopping tolerance")->capture_default_str();
  solve_cmd->add_option("--max-iter", solve_args.max_iter, "Iteration cap")->capture_default_str();
  solve_cmd->add_flag("--no-trace", solve_args.no_trace, "Omit the per-iteration trace");
  solve_cmd->add_option("-o,--output", solve_args.output, "Output path (default: stdout)");

  LpArgs lp_args;
  auto* lp_cmd = app.add_subcommand("lp", "Solve min 1^T x s.t. A x = b, x >= 0 by simplex");
  lp_cmd->add_option("--matrix", lp_args.matrix, "Matrix file (text format)")->required();
  lp_cmd->add_option("--rhs", lp_args.rhs, "Right-hand side vector file")->required();
  lp_cmd->add_option("--feas-tol", lp_args.feas_tol, "Feasibility tolerance")->capture_default_str();
  lp_cmd->add_option("-o,--output", lp_args.output, "Output path (default: stdout)");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo success-rate sweep, CSV output");
  sweep_cmd->add_option("--m", sweep_args.m, "Rows of A")->capture_default_str();
  sweep_cmd->add_option("--n", sweep_args.n, "Columns of A")->capture_default_str();
  sweep_cmd->add_option("--r", sweep_args.range, "Sparsity range start:stop:step (or a single value)")
      ->capture_default_str();
  sweep_cmd->add_option("--trials", sweep_args.trials, "Trials per sparsity level")->capture_default_str();
  sweep_cmd->add_option("--a", sweep_args.a_values, "NIT shape values (repeat or comma-separate)")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_args.seed, "Master seed")->capture_default_str();
  sweep_cmd->add_option("--success-re", sweep_args.success_re, "Relative error counted as recovery")
      ->capture_default_str();
  sweep_cmd->add_option("--epsilon", sweep_args.epsilon, "NIT step-size margin")->capture_default_str();
  sweep_cmd->add_option("--tol", sweep_args.tol, "NIT stopping tolerance")->capture_default_str();
  sweep_cmd->add_option("--max-iter", sweep_args.max_iter, "NIT iteration cap")->capture_default_str();
  sweep_cmd->add_flag("--no-lp", sweep_args.no_lp, "Skip the linear-programming baseline");
  sweep_cmd->add_flag("--timing", sweep_args.timing,
                      "Fill mean_time_s with wall-clock times (output is then not reproducible)");
  sweep_cmd->add_option("-o,--output", sweep_args.output, "Output path (default: stdout)");
  sweep_cmd->footer("Environment: FRACSENSE_THREADS caps worker threads (0 or unset = auto).");

  ProxCheckArgs prox_args;
  auto* prox_cmd = app.add_subcommand("prox-check", "Compare the closed-form prox with a brute-force minimizer");
  prox_cmd->add_option("--a", prox_args.a, "Fraction penalty shape a")->capture_default_str();
  prox_cmd->add_option("--lambda", prox_args.lambda, "Penalty weight lambda")->capture_default_str();
  prox_cmd->add_option("--v-min", prox_args.v_min, "Smallest v")->capture_default_str();
  prox_cmd->add_option("--v-max", prox_args.v_max, "Largest v")->capture_default_str();
  prox_cmd->add_option("--step", prox_args.step, "Spacing of v")->capture_default_str();
  prox_cmd->add_option("--max-dev", prox_args.max_dev, "Allowed deviation")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*solve_cmd) return run_solve(solve_args);
    if (*lp_cmd) return run_lp(lp_args);
    if (*sweep_cmd) return run_sweep_cmd(sweep_args);
    if (*prox_cmd) return run_prox_check(prox_args);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInvalid;
}
