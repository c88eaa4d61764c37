#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fracsense/linalg.hpp"
#include "fracsense/rng.hpp"

namespace fracsense {

/// One Monte-Carlo phase-transition sweep.
struct TrialSpec {
  Eigen::Index m = 100;
  Eigen::Index n = 256;
  std::vector<Eigen::Index> sparsities;
  int n_trials = 100;
  std::vector<double> a_values{1, 3, 5, 7, 30, 100};
  bool include_lp = true;
  RngSeed seed{42};
  double success_re = 1e-4;

  // NIT settings shared by every a.
  double epsilon = 0.01;
  double tol = 1e-8;
  int max_iter = 10000;

  /// Record wall-clock time per solve. Off by default so output is reproducible.
  bool record_timing = false;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

struct MethodId {
  enum class Kind { Nit, Lp };
  Kind kind = Kind::Nit;
  double a = 0.0;  // NIT only

  static MethodId nit(double a) { return {Kind::Nit, a}; }
  static MethodId lp() { return {Kind::Lp, 0.0}; }

  /// "nit_a<value>" or "lp".
  std::string name() const;

  friend bool operator==(const MethodId&, const MethodId&) = default;
  /// NIT methods by increasing a, then LP.
  friend bool operator<(const MethodId& x, const MethodId& y) {
    if (x.kind != y.kind) return x.kind == Kind::Nit;
    return x.a < y.a;
  }
};

struct TrialResult {
  MethodId method;
  Eigen::Index r = 0;
  int trial_index = 0;
  double relative_error = 0.0;  // NaN when the solver raised
  bool success = false;
  int iterations = 0;           // NIT updates or simplex pivots
  double wall_time_s = 0.0;
  std::string error;            // empty unless the solver raised
};

struct ProblemInstance {
  Matrix A;
  Vector x0;
  Vector b;
};

/// A from gaussian_matrix, then r distinct support indices (partial
/// Fisher-Yates), then |N(0,1)| magnitudes (redrawn on exact zero), b = A x0.
/// All draws come from one stream seeded by `seed`.
ProblemInstance generate_instance(Eigen::Index m, Eigen::Index n, Eigen::Index r, RngSeed seed);

/// ||x_star - x0|| / ||x0||. Throws std::invalid_argument when x0 = 0.
double relative_error(const Vector& x_star, const Vector& x0);

/// Every (sparsity, trial, method) combination, sorted by method then r then
/// trial. Trial instances use derive_trial_seed(spec.seed, r, trial), shared
/// by all methods. Solver exceptions are captured in the result, not thrown.
std::vector<TrialResult> run_sweep(const TrialSpec& spec);

struct AggregateRow {
  MethodId method;
  Eigen::Index r = 0;
  int trials = 0;
  double success_rate = 0.0;
  double mean_re = 0.0;  // over trials with a finite relative error
  double mean_iters = 0.0;
  double mean_time_s = 0.0;
};

/// One row per (method, r), ordered like run_sweep. Throws on empty input.
std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& results);

/// Header `method,r,success_rate,mean_re,mean_iters,mean_time_s`, floats with
/// 6 significant digits.
void write_csv(std::ostream& os, const std::vector<AggregateRow>& rows);

/// Parses "start:stop:step" (inclusive of stop when reachable) or a single integer.
std::vector<Eigen::Index> parse_range(const std::string& text);

}  // namespace fracsense
