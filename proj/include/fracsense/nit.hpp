#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "fracsense/errors.hpp"
#include "fracsense/linalg.hpp"
#include "fracsense/penalty.hpp"

namespace fracsense {

/// Smallest lambda the schedule hands to the penalty. An exactly r-sparse
/// projected step makes the lower bracket zero, which PenaltyParams rejects.
inline constexpr double kLambdaFloor = 1e-12;

template <typename Scalar>
struct SolverConfig {
  Scalar a = Scalar(5);
  /// Sparsity r fed to the lambda schedule. Ignored when lambda_override is set.
  Eigen::Index sparsity = 1;
  /// Step size mu = (1 - epsilon) / ||A||_2^2 unless step_size is given.
  Scalar epsilon = Scalar(0.01);
  Scalar tol = Scalar(1e-8);
  int max_iter = 10000;
  std::optional<Scalar> lambda_override;
  std::optional<Scalar> step_size;
  bool record_trace = true;

  void validate(Eigen::Index n) const {
    if (!(std::isfinite(a) && a > 0)) throw std::invalid_argument("SolverConfig: a must be positive");
    if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("SolverConfig: epsilon must lie in (0,1)");
    if (!(tol > 0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (lambda_override && !(std::isfinite(*lambda_override) && *lambda_override > 0))
      throw std::invalid_argument("SolverConfig: lambda_override must be positive");
    if (step_size && !(std::isfinite(*step_size) && *step_size > 0))
      throw std::invalid_argument("SolverConfig: step_size must be positive");
    if (!lambda_override && (sparsity < 1 || sparsity >= n))
      throw std::invalid_argument("SolverConfig: sparsity must satisfy 1 <= r < n");
  }
};

template <typename Scalar>
struct IterationRecord {
  int k;
  Scalar objective;   // ||A x^k - b||^2 + lambda_k P_a(x^k)
  Scalar step_delta;  // ||x^{k+1} - x^k||
  Scalar lambda_k;
  Scalar residual;    // ||A x^k - b||
};

enum class Termination { Converged, MaxIter };

template <typename Scalar>
struct SolveReport {
  SignalVector<Scalar> solution;
  std::vector<IterationRecord<Scalar>> trace;
  Termination termination = Termination::MaxIter;
  int iterations = 0;
  Scalar mu = Scalar(0);
  Scalar fixed_point_residual = Scalar(0);
};

template <typename Scalar>
struct LambdaChoice {
  Scalar lambda;
  Scalar threshold;
  bool upper_branch;  // lambda came from the r-th entry bracket
};

/// B_mu(z) = z + mu A^T (b - A z).
template <typename Scalar, typename DerivedB, typename DerivedZ>
SignalVector<Scalar> gradient_step(const DenseMatrix<Scalar>& A, const Eigen::MatrixBase<DerivedB>& b,
                                   const Eigen::MatrixBase<DerivedZ>& z, Scalar mu) {
  detail::require_dims(A.rows() == b.size() && A.cols() == z.size(),
                       "gradient_step: inconsistent dimensions");
  if (!(mu > 0)) throw std::invalid_argument("gradient_step: mu must be positive");
  return z + mu * (A.transpose() * (b - A * z));
}

/// ||A x - b||^2 + lambda P_a(x).
template <typename Scalar, typename DerivedB, typename DerivedX>
Scalar objective(const DenseMatrix<Scalar>& A, const Eigen::MatrixBase<DerivedB>& b,
                 const Eigen::MatrixBase<DerivedX>& x, Scalar a, Scalar lambda) {
  detail::require_dims(A.rows() == b.size() && A.cols() == x.size(),
                       "objective: inconsistent dimensions");
  return (A * x - b).squaredNorm() + lambda * penalty(a, x);
}

/// Adaptive lambda from the r-th and (r+1)-th largest entries of the
/// projected gradient step (`rth`, `next`):
///   lambda1 = 2 next / (a mu); kept when lambda1 <= 1/(a^2 mu), threshold lambda mu a / 2
///   lambda2 = (2 a rth + 1)^2 / (4 a^2 mu) otherwise, threshold max(sqrt(lambda mu) - 1/(2a), 0)
/// lambda1 is floored at kLambdaFloor.
template <typename Scalar>
LambdaChoice<Scalar> schedule_lambda_from_order_stats(Scalar rth, Scalar next, Scalar a, Scalar mu) {
  const Scalar lambda1 = Scalar(2) * next / (a * mu);
  if (lambda1 <= Scalar(1) / (a * a * mu)) {
    const Scalar lambda = std::max(lambda1, Scalar(kLambdaFloor));
    return {lambda, lambda * mu * a / Scalar(2), false};
  }
  const Scalar s = Scalar(2) * a * rth + Scalar(1);
  const Scalar lambda2 = s * s / (Scalar(4) * a * a * mu);
  const Scalar t = std::max(std::sqrt(lambda2 * mu) - Scalar(1) / (Scalar(2) * a), Scalar(0));
  return {lambda2, t, true};
}

/// Same rule on a fully sorted (nonincreasing, nonnegative) projected step.
template <typename Derived>
LambdaChoice<typename Derived::Scalar> schedule_lambda(const Eigen::MatrixBase<Derived>& sorted,
                                                       Eigen::Index r,
                                                       typename Derived::Scalar a,
                                                       typename Derived::Scalar mu) {
  using Scalar = typename Derived::Scalar;
  if (r < 1 || r + 1 > sorted.size())
    throw std::invalid_argument("schedule_lambda: need 1 <= r and r + 1 <= n");
  if (!(a > 0) || !(mu > 0)) throw std::invalid_argument("schedule_lambda: a and mu must be positive");
  for (Eigen::Index i = 0; i < sorted.size(); ++i) {
    if (sorted(i) < Scalar(0)) throw std::invalid_argument("schedule_lambda: negative entry");
    if (i > 0 && sorted(i) > sorted(i - 1))
      throw std::invalid_argument("schedule_lambda: input not sorted nonincreasing");
  }
  return schedule_lambda_from_order_stats(Scalar(sorted(r - 1)), Scalar(sorted(r)), a, mu);
}

/// (1 - epsilon) / ||A||_2^2.
template <typename Scalar>
Scalar default_step_size(const DenseMatrix<Scalar>& A, Scalar epsilon,
                         const PowerIterationOptions& opts = {}) {
  if (!(epsilon > 0 && epsilon < 1))
    throw std::invalid_argument("default_step_size: epsilon must lie in (0,1)");
  return (Scalar(1) - epsilon) / spectral_norm_sq(A, opts);
}

template <typename Scalar>
struct NitStep {
  SignalVector<Scalar> next;
  Scalar lambda;
  Scalar residual_norm;  // ||A x - b|| at the input point
};

/// One NIT update x -> T_{a, lambda mu}(max(0, B_mu(x))).
///
/// With the schedule active, entries at or above the r-th largest projected
/// value are always kept (the upper bracket puts the threshold exactly on
/// that entry, and the strict "> t" test would otherwise drop it).
template <typename Scalar, typename DerivedB, typename DerivedX>
NitStep<Scalar> nit_step(const DenseMatrix<Scalar>& A, const Eigen::MatrixBase<DerivedB>& b,
                         const Eigen::MatrixBase<DerivedX>& x, Scalar mu,
                         const SolverConfig<Scalar>& cfg) {
  detail::require_dims(A.rows() == b.size() && A.cols() == x.size(),
                       "nit_step: inconsistent dimensions");
  const SignalVector<Scalar> residual = b - A * x;
  const SignalVector<Scalar> z = (x + mu * (A.transpose() * residual)).cwiseMax(Scalar(0));

  if (cfg.lambda_override) {
    const PenaltyParams<Scalar> params(cfg.a, *cfg.lambda_override * mu);
    return {prox_vector(params, z), *cfg.lambda_override, residual.norm()};
  }

  const Eigen::Index r = cfg.sparsity;
  std::vector<Scalar> order(z.data(), z.data() + z.size());
  std::nth_element(order.begin(), order.begin() + r, order.end(), std::greater<Scalar>());
  const Scalar next_value = order[static_cast<std::size_t>(r)];
  const Scalar rth = *std::min_element(order.begin(), order.begin() + r);

  const LambdaChoice<Scalar> choice = schedule_lambda_from_order_stats(rth, next_value, cfg.a, mu);
  const PenaltyParams<Scalar> params(cfg.a, choice.lambda * mu);
  SignalVector<Scalar> out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const Scalar zi = z(i);
    const bool keep = zi > choice.threshold || (zi >= rth && zi > Scalar(0));
    out(i) = keep ? fraction_shrink(params, zi) : Scalar(0);
  }
  return {std::move(out), choice.lambda, residual.norm()};
}

/// Runs the NIT iteration from x0 (zero by default) until
/// ||x^{k+1} - x^k|| <= tol ||x^k|| or max_iter updates.
template <typename Scalar, typename DerivedB>
SolveReport<Scalar> solve(const DenseMatrix<Scalar>& A, const Eigen::MatrixBase<DerivedB>& b,
                          const SolverConfig<Scalar>& cfg,
                          const std::type_identity_t<std::optional<SignalVector<Scalar>>>& x0 = std::nullopt) {
  detail::require_dims(A.rows() == b.size(), "solve: A.rows() != b.size()");
  if (x0) detail::require_dims(x0->size() == A.cols(), "solve: x0 has wrong length");
  cfg.validate(A.cols());

  SolveReport<Scalar> report;
  report.mu = cfg.step_size ? *cfg.step_size : default_step_size(A, cfg.epsilon);
  const Scalar mu = report.mu;

  SignalVector<Scalar> x = x0 ? *x0 : SignalVector<Scalar>::Zero(A.cols());
  for (int k = 0; k < cfg.max_iter; ++k) {
    NitStep<Scalar> step = nit_step(A, b, x, mu, cfg);
    if (!step.next.allFinite()) throw DivergedError("solve: non-finite iterate");

    const Scalar delta = (step.next - x).norm();
    const Scalar x_norm = x.norm();
    if (cfg.record_trace) {
      const Scalar obj = step.residual_norm * step.residual_norm + step.lambda * penalty(cfg.a, x);
      report.trace.push_back({k, obj, delta, step.lambda, step.residual_norm});
    }
    x = std::move(step.next);
    report.iterations = k + 1;
    const bool converged = x_norm > Scalar(0) ? delta <= cfg.tol * x_norm : delta == Scalar(0);
    if (converged) {
      report.termination = Termination::Converged;
      break;
    }
  }

  report.fixed_point_residual = (x - nit_step(A, b, x, mu, cfg).next).norm();
  report.solution = std::move(x);
  return report;
}

}  // namespace fracsense
