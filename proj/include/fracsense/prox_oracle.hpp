#pragma once

#include <vector>

namespace fracsense {

/// Brute-force minimizer of h(x) = (x - v)^2 + lambda * a|x| / (a|x| + 1).
///
/// Independent of the closed-form operator: scans a uniform grid over
/// [0, |v|], refines every grid-local minimum (plus the x = 0 endpoint) by
/// trisection, and keeps all refined candidates whose objective is within
/// `tie_tol` of the best. More than one candidate means the argmin is a set.
struct ProxOracleResult {
  double minimizer;               // best candidate, signed like v
  double objective;               // h(minimizer)
  std::vector<double> minimizers; // every candidate tied with the best, signed
};

struct ProxOracleOptions {
  double grid_step = 1e-4;
  double refine_width = 1e-13;
  double tie_tol = 1e-12;
};

ProxOracleResult brute_force_prox(double a, double lambda, double v,
                                  const ProxOracleOptions& opts = {});

/// Objective h above, evaluated without any shared code path.
double prox_objective(double a, double lambda, double v, double x);

/// Result of comparing the closed-form operator with the oracle on a v-grid.
struct ProxCheckReport {
  double max_deviation = 0.0;      // max over v of the distance to the oracle's argmin set
  double max_objective_excess = 0.0;  // max of h(closed form) - h(oracle), may be negative
  double worst_v = 0.0;
  int points = 0;
};

/// Runs the comparison for v = v_min, v_min + step, ..., v_max (index-based).
ProxCheckReport check_prox_against_oracle(double a, double lambda, double v_min, double v_max,
                                          double step, const ProxOracleOptions& opts = {});

}  // namespace fracsense
