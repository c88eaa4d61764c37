#include "fracsense/prox_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracsense/penalty.hpp"

namespace fracsense {

double prox_objective(double a, double lambda, double v, double x) {
  const double d = x - v;
  const double ax = a * std::fabs(x);
  return d * d + lambda * ax / (ax + 1.0);
}

namespace {

double trisect(double a, double lambda, double s, double lo, double hi, double width) {
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (prox_objective(a, lambda, s, m1) <= prox_objective(a, lambda, s, m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ProxOracleResult brute_force_prox(double a, double lambda, double v,
                                  const ProxOracleOptions& opts) {
  if (!(a > 0) || !(lambda > 0) || !std::isfinite(v))
    throw std::invalid_argument("brute_force_prox: need a > 0, lambda > 0, finite v");
  const double s = std::fabs(v);
  const double sign = v < 0 ? -1.0 : 1.0;

  // x = 0 is always a candidate (boundary of the search interval).
  std::vector<double> candidates{0.0};
  if (s > 0) {
    const auto cells = static_cast<long>(std::ceil(s / opts.grid_step));
    const double h = s / static_cast<double>(cells);
    auto f = [&](long i) { return prox_objective(a, lambda, s, h * static_cast<double>(i)); };
    double prev = f(0);
    double cur = f(1);
    for (long i = 1; i <= cells; ++i) {
      const double next = i < cells ? f(i + 1) : std::numeric_limits<double>::infinity();
      if (cur <= prev && cur <= next) {
        const double lo = h * static_cast<double>(i - 1);
        const double hi = std::min(s, h * static_cast<double>(i + 1));
        candidates.push_back(trisect(a, lambda, s, lo, hi, opts.refine_width));
      }
      prev = cur;
      cur = next;
    }
    candidates.push_back(s);
  }

  double best = std::numeric_limits<double>::infinity();
  double best_x = 0.0;
  for (double x : candidates) {
    const double val = prox_objective(a, lambda, s, x);
    if (val < best) {
      best = val;
      best_x = x;
    }
  }
  ProxOracleResult out{sign * best_x, best, {}};
  const double slack = opts.tie_tol * std::max(1.0, std::fabs(best));
  for (double x : candidates)
    if (prox_objective(a, lambda, s, x) <= best + slack) out.minimizers.push_back(sign * x);
  return out;
}

ProxCheckReport check_prox_against_oracle(double a, double lambda, double v_min, double v_max,
                                          double step, const ProxOracleOptions& opts) {
  if (!(step > 0) || v_max < v_min) throw std::invalid_argument("check_prox: bad v range");
  const PenaltyParams<double> params(a, lambda);
  ProxCheckReport report;
  report.max_objective_excess = -std::numeric_limits<double>::infinity();
  const auto count = static_cast<long>(std::floor((v_max - v_min) / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    const double v = v_min + step * static_cast<double>(i);
    const ProxOracleResult oracle = brute_force_prox(a, lambda, v, opts);
    const double x = prox_scalar(params, v);
    double dev = std::numeric_limits<double>::infinity();
    for (double m : oracle.minimizers) dev = std::min(dev, std::fabs(x - m));
    if (dev > report.max_deviation) {
      report.max_deviation = dev;
      report.worst_v = v;
    }
    report.max_objective_excess = std::max(
        report.max_objective_excess, prox_objective(a, lambda, v, x) - oracle.objective);
    ++report.points;
  }
  return report;
}

}  // namespace fracsense
