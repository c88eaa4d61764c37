#include "fracsense/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "fracsense/lp.hpp"
#include "fracsense/nit.hpp"

namespace fracsense {

void TrialSpec::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("TrialSpec: m and n must be positive");
  if (m > n) throw std::invalid_argument("TrialSpec: need m <= n");
  if (sparsities.empty()) throw std::invalid_argument("TrialSpec: no sparsity levels");
  for (Eigen::Index r : sparsities) {
    if (r < 1) throw std::invalid_argument("TrialSpec: sparsity must be >= 1 (relative error needs x0 != 0)");
    if (r > m) throw std::invalid_argument("TrialSpec: sparsity must not exceed m");
  }
  if (n_trials < 1) throw std::invalid_argument("TrialSpec: n_trials must be >= 1");
  if (a_values.empty() && !include_lp) throw std::invalid_argument("TrialSpec: no methods selected");
  for (double a : a_values)
    if (!(std::isfinite(a) && a > 0)) throw std::invalid_argument("TrialSpec: a values must be positive");
  if (!(success_re > 0)) throw std::invalid_argument("TrialSpec: success_re must be positive");
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("TrialSpec: epsilon must lie in (0,1)");
  if (!(tol > 0) || max_iter < 1) throw std::invalid_argument("TrialSpec: bad tol or max_iter");
}

std::string MethodId::name() const {
  if (kind == Kind::Lp) return "lp";
  char buf[64];
  std::snprintf(buf, sizeof buf, "nit_a%g", a);
  return buf;
}

ProblemInstance generate_instance(Eigen::Index m, Eigen::Index n, Eigen::Index r, RngSeed seed) {
  if (r < 0 || r > n) throw std::invalid_argument("generate_instance: need 0 <= r <= n");
  Rng rng(seed);
  ProblemInstance inst;
  inst.A = gaussian_matrix(m, n, rng);

  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index i = 0; i < r; ++i) {
    const auto j = i + static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }

  inst.x0 = Vector::Zero(n);
  for (Eigen::Index i = 0; i < r; ++i) {
    double v = 0.0;
    while (v == 0.0) v = std::abs(rng.normal());
    inst.x0(perm[static_cast<std::size_t>(i)]) = v;
  }
  inst.b = inst.A * inst.x0;
  return inst;
}

double relative_error(const Vector& x_star, const Vector& x0) {
  detail::require_dims(x_star.size() == x0.size(), "relative_error: length mismatch");
  const double denom = x0.norm();
  if (denom == 0.0) throw std::invalid_argument("relative_error: x0 = 0");
  return (x_star - x0).norm() / denom;
}

namespace {

std::vector<MethodId> methods_of(const TrialSpec& spec) {
  std::vector<MethodId> out;
  for (double a : spec.a_values) out.push_back(MethodId::nit(a));
  if (spec.include_lp) out.push_back(MethodId::lp());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename F>
TrialResult timed_trial(const TrialSpec& spec, MethodId method, Eigen::Index r, int trial,
                        const Vector& x0, F&& run) {
  TrialResult res;
  res.method = method;
  res.r = r;
  res.trial_index = trial;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto [x, iters] = run();
    res.iterations = iters;
    res.relative_error = relative_error(x, x0);
    res.success = res.relative_error <= spec.success_re;
  } catch (const std::exception& e) {
    res.relative_error = std::numeric_limits<double>::quiet_NaN();
    res.success = false;
    res.error = e.what();
  }
  if (spec.record_timing)
    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<TrialResult> run_task(const TrialSpec& spec, const std::vector<MethodId>& methods,
                                  Eigen::Index r, int trial) {
  const RngSeed seed = derive_trial_seed(spec.seed, static_cast<std::uint64_t>(r),
                                         static_cast<std::uint64_t>(trial));
  const ProblemInstance inst = generate_instance(spec.m, spec.n, r, seed);

  std::vector<TrialResult> out;
  double mu = 0.0;
  std::string mu_error;
  try {
    mu = default_step_size(inst.A, spec.epsilon);
  } catch (const std::exception& e) {
    mu_error = e.what();
  }

  for (const MethodId& method : methods) {
    if (method.kind == MethodId::Kind::Nit) {
      out.push_back(timed_trial(spec, method, r, trial, inst.x0, [&] {
        if (!mu_error.empty()) throw std::runtime_error(mu_error);
        SolverConfig<double> cfg;
        cfg.a = method.a;
        cfg.sparsity = r;
        cfg.epsilon = spec.epsilon;
        cfg.tol = spec.tol;
        cfg.max_iter = spec.max_iter;
        cfg.step_size = mu;
        cfg.record_trace = false;
        SolveReport<double> rep = solve(inst.A, inst.b, cfg);
        return std::pair<Vector, int>(std::move(rep.solution), rep.iterations);
      }));
    } else {
      out.push_back(timed_trial(spec, method, r, trial, inst.x0, [&] {
        LpSolution sol = solve_lp(inst.A, inst.b);
        if (sol.status != LpStatus::Optimal) throw std::runtime_error("LP not optimal");
        return std::pair<Vector, int>(std::move(sol.x), sol.pivots);
      }));
    }
  }
  return out;
}

}  // namespace

std::vector<TrialResult> run_sweep(const TrialSpec& spec) {
  spec.validate();
  const std::vector<MethodId> methods = methods_of(spec);

  std::vector<std::pair<Eigen::Index, int>> tasks;
  for (Eigen::Index r : spec.sparsities)
    for (int t = 0; t < spec.n_trials; ++t) tasks.emplace_back(r, t);

  std::vector<std::vector<TrialResult>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        slots[i] = run_task(spec, methods, tasks[i].first, tasks[i].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TrialResult> results;
  for (auto& slot : slots)
    for (auto& res : slot) results.push_back(std::move(res));
  std::sort(results.begin(), results.end(), [](const TrialResult& x, const TrialResult& y) {
    if (!(x.method == y.method)) return x.method < y.method;
    if (x.r != y.r) return x.r < y.r;
    return x.trial_index < y.trial_index;
  });
  return results;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate: no results");

  struct Acc {
    int trials = 0;
    int successes = 0;
    int finite = 0;
    double re_sum = 0.0;
    double iter_sum = 0.0;
    double time_sum = 0.0;
  };
  // Per-group sums are taken in trial order so the output does not depend
  // on the order results arrive in.
  std::vector<const TrialResult*> sorted;
  for (const auto& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const TrialResult* x, const TrialResult* y) {
    if (!(x->method == y->method)) return x->method < y->method;
    if (x->r != y->r) return x->r < y->r;
    return x->trial_index < y->trial_index;
  });

  std::vector<AggregateRow> rows;
  Acc acc;
  auto flush = [&](const TrialResult& key) {
    AggregateRow row;
    row.method = key.method;
    row.r = key.r;
    row.trials = acc.trials;
    row.success_rate = static_cast<double>(acc.successes) / acc.trials;
    row.mean_re = acc.finite ? acc.re_sum / acc.finite : std::numeric_limits<double>::quiet_NaN();
    row.mean_iters = acc.iter_sum / acc.trials;
    row.mean_time_s = acc.time_sum / acc.trials;
    rows.push_back(row);
    acc = Acc{};
  };
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const TrialResult& res = *sorted[i];
    ++acc.trials;
    acc.successes += res.success ? 1 : 0;
    if (std::isfinite(res.relative_error)) {
      ++acc.finite;
      acc.re_sum += res.relative_error;
    }
    acc.iter_sum += res.iterations;
    acc.time_sum += res.wall_time_s;
    const bool last = i + 1 == sorted.size() || !(sorted[i + 1]->method == res.method) ||
                      sorted[i + 1]->r != res.r;
    if (last) flush(res);
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "method,r,success_rate,mean_re,mean_iters,mean_time_s\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%s,%lld,%.6g,%.6g,%.6g,%.6g\n", row.method.name().c_str(),
                  static_cast<long long>(row.r), row.success_rate, row.mean_re, row.mean_iters,
                  row.mean_time_s);
    os << buf;
  }
}

std::vector<Eigen::Index> parse_range(const std::string& text) {
  auto parse_int = [&](const std::string& tok) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tok.size())
      throw std::invalid_argument("range: '" + text + "' is not start:stop:step");
    return static_cast<Eigen::Index>(v);
  };

  std::vector<std::string> parts;
  std::size_t begin = 0;
  for (std::size_t pos; (pos = text.find(':', begin)) != std::string::npos; begin = pos + 1)
    parts.push_back(text.substr(begin, pos - begin));
  parts.push_back(text.substr(begin));

  if (parts.size() == 1) return {parse_int(parts[0])};
  if (parts.size() != 3) throw std::invalid_argument("range: '" + text + "' is not start:stop:step");
  const Eigen::Index start = parse_int(parts[0]);
  const Eigen::Index stop = parse_int(parts[1]);
  const Eigen::Index step = parse_int(parts[2]);
  if (step < 1 || stop < start) throw std::invalid_argument("range: need step >= 1 and stop >= start");
  std::vector<Eigen::Index> out;
  for (Eigen::Index v = start; v <= stop; v += step) out.push_back(v);
  return out;
}

}  // namespace fracsense
