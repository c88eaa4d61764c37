#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fracsense/errors.hpp"
#include "fracsense/linalg.hpp"

namespace fracsense {

/// Shape `a` and weight `lambda` of the fraction penalty lambda * sum a|x|/(a|x|+1).
template <typename Scalar>
struct PenaltyParams {
  Scalar a;
  Scalar lambda;

  PenaltyParams(Scalar a_, Scalar lambda_) : a(a_), lambda(lambda_) {
    if (!(std::isfinite(a) && a > 0) || !(std::isfinite(lambda) && lambda > 0))
      throw std::invalid_argument("PenaltyParams: a and lambda must be finite and positive");
  }
};

template <typename Scalar>
struct ThresholdValues {
  Scalar t1;
  Scalar t2;
  Scalar t3;
  Scalar t_star;
};

/// rho_a(t) = a|t| / (a|t| + 1).
template <typename Scalar>
Scalar rho(Scalar a, Scalar t) {
  const Scalar at = a * std::abs(t);
  return at / (at + Scalar(1));
}

/// P_a(x) = sum_i rho_a(x_i).
template <typename Derived>
typename Derived::Scalar penalty(typename Derived::Scalar a, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto at = a * x.array().abs();
  return (at / (at + Scalar(1))).sum();
}

/// The three candidate thresholds and the active one. t1 <= t3 <= t2, all
/// equal to 1/(2a) at lambda = 1/a^2; the active threshold is t2 below that
/// point and t3 above it.
template <typename Scalar>
ThresholdValues<Scalar> thresholds(const PenaltyParams<Scalar>& p) {
  const Scalar a = p.a;
  const Scalar lam = p.lambda;
  ThresholdValues<Scalar> t;
  t.t1 = (std::cbrt(Scalar(27) / Scalar(8) * lam * a * a) - Scalar(1)) / a;
  t.t2 = lam * a / Scalar(2);
  t.t3 = std::sqrt(lam) - Scalar(1) / (Scalar(2) * a);
  t.t_star = lam <= Scalar(1) / (a * a) ? t.t2 : t.t3;
  return t;
}

namespace detail {

// Rounding can push the arccos argument just past 1 near |v| = t1; beyond
// this slack the caller asked for g below its domain.
inline constexpr double kArccosSlack = 1e-9;

}  // namespace detail

/// The nonzero branch g_{a,lambda}(v) of the thresholding operator: the
/// stationary point of (x - v)^2 + lambda rho_a(x) on the side of v, in
/// trigonometric closed form. Defined for |v| >= t1; returns 0 at v = 0.
template <typename Scalar>
Scalar fraction_shrink(const PenaltyParams<Scalar>& p, Scalar v) {
  if (v == Scalar(0)) return Scalar(0);
  const Scalar a = p.a;
  const Scalar av1 = Scalar(1) + a * std::abs(v);
  Scalar arg = Scalar(27) * p.lambda * a * a / (Scalar(4) * av1 * av1 * av1) - Scalar(1);
  if (arg > Scalar(1)) {
    if (arg > Scalar(1) + Scalar(detail::kArccosSlack))
      throw InternalError("fraction_shrink: arccos argument " + std::to_string(double(arg)) +
                          " outside [-1, 1]");
    arg = Scalar(1);
  }
  const Scalar phi = std::acos(arg);
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar mag =
      (av1 / Scalar(3) * (Scalar(1) + Scalar(2) * std::cos(phi / Scalar(3) - pi / Scalar(3))) -
       Scalar(1)) /
      a;
  return std::copysign(mag, v);
}

/// argmin_x (x - v)^2 + lambda rho_a(x). |v| <= t_star maps to 0.
template <typename Scalar>
Scalar prox_scalar(const PenaltyParams<Scalar>& p, Scalar v) {
  const Scalar t_star = thresholds(p).t_star;
  if (std::abs(v) <= t_star) return Scalar(0);
  return fraction_shrink(p, v);
}

/// Componentwise prox_scalar; minimizes ||x - v||^2 + lambda P_a(x).
template <typename Derived>
SignalVector<typename Derived::Scalar> prox_vector(
    const PenaltyParams<typename Derived::Scalar>& p, const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar t_star = thresholds(p).t_star;
  SignalVector<Scalar> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = std::abs(v(i)) <= t_star ? Scalar(0) : fraction_shrink(p, Scalar(v(i)));
  return out;
}

/// max(0, v) componentwise.
template <typename Derived>
SignalVector<typename Derived::Scalar> project_nonneg(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseMax(typename Derived::Scalar(0));
}

/// argmin_{x >= 0} ||x - v||^2 + lambda P_a(x), computed as prox_vector(project_nonneg(v)).
template <typename Derived>
SignalVector<typename Derived::Scalar> nonneg_prox(
    const PenaltyParams<typename Derived::Scalar>& p, const Eigen::MatrixBase<Derived>& v) {
  return prox_vector(p, project_nonneg(v));
}

}  // namespace fracsense
