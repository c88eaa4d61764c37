#pragma once

// Test-only reference computations. Nothing here calls into the solver paths
// it is used to check.

#include <cmath>
#include <utility>

#include "fracsense/linalg.hpp"

namespace fracsense::testing {

/// Largest eigenvalue of a symmetric 2x2 matrix from its characteristic polynomial.
inline double largest_eig_2x2(double a11, double a12, double a22) {
  const double tr = a11 + a22;
  const double det = a11 * a22 - a12 * a12;
  return 0.5 * (tr + std::sqrt(tr * tr - 4.0 * det));
}

/// z + mu A^T (b - A z) with explicit loops.
inline Vector gradient_step_loops(const Matrix& A, const Vector& b, const Vector& z, double mu) {
  Vector r(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double s = b(i);
    for (Eigen::Index j = 0; j < A.cols(); ++j) s -= A(i, j) * z(j);
    r(i) = s;
  }
  Vector out = z;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) s += A(i, j) * r(i);
    out(j) += mu * s;
  }
  return out;
}

/// Nonnegative random vector with `nnz` entries, fixed stream.
inline Vector sparse_nonneg(Eigen::Index n, Eigen::Index nnz, Rng& rng) {
  Vector x = Vector::Zero(n);
  for (Eigen::Index k = 0; k < nnz;) {
    const auto i = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    if (x(i) != 0.0) continue;
    x(i) = 0.5 + rng.uniform01();
    ++k;
  }
  return x;
}

}  // namespace fracsense::testing
