#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "fracsense/errors.hpp"
#include "fracsense/rng.hpp"

namespace fracsense {

/// Row-major dense m x n measurement matrix.
template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using SignalVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = SignalVector<double>;

/// y = A x.
template <typename Scalar, typename DerivedX>
SignalVector<Scalar> matvec(const DenseMatrix<Scalar>& A, const Eigen::MatrixBase<DerivedX>& x) {
  detail::require_dims(A.cols() == x.size(), "matvec: A.cols() != x.size()");
  return A * x;
}

/// y = A^T v.
template <typename Scalar, typename DerivedY>
SignalVector<Scalar> matvec_transpose(const DenseMatrix<Scalar>& A,
                                      const Eigen::MatrixBase<DerivedY>& y) {
  detail::require_dims(A.rows() == y.size(), "matvec_transpose: A.rows() != y.size()");
  return A.transpose() * y;
}

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 1000;
  RngSeed seed{0x5eedULL};
};

/// Largest eigenvalue of A^T A (i.e. ||A||_2^2) by power iteration from a
/// seeded Gaussian start. Stops when successive Rayleigh quotients agree to
/// `tol` relative, or after `max_iter` multiplications.
template <typename Scalar>
Scalar spectral_norm_sq(const DenseMatrix<Scalar>& A, const PowerIterationOptions& opts = {}) {
  if (!(opts.tol > 0) || opts.max_iter < 1)
    throw std::invalid_argument("spectral_norm_sq: need tol > 0 and max_iter >= 1");
  if (A.size() == 0 || A.cwiseAbs().maxCoeff() == Scalar(0))
    throw std::invalid_argument("spectral_norm_sq: zero matrix has no dominant eigenpair");

  Rng rng(opts.seed);
  SignalVector<Scalar> v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = static_cast<Scalar>(rng.normal());
  v.normalize();

  Scalar estimate = (A * v).squaredNorm();
  for (int it = 0; it < opts.max_iter; ++it) {
    SignalVector<Scalar> w = A.transpose() * (A * v);
    const Scalar w_norm = w.norm();
    if (w_norm == Scalar(0)) {
      // Start vector landed in the null space; restart from a fresh draw.
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = static_cast<Scalar>(rng.normal());
      v.normalize();
      continue;
    }
    v = w / w_norm;
    const Scalar next = (A * v).squaredNorm();
    const bool done = std::abs(next - estimate) <= Scalar(opts.tol) * std::abs(next);
    estimate = next;
    if (done) break;
  }
  return estimate;
}

/// m x n matrix of i.i.d. N(0,1) draws, filled row by row from `rng`.
template <typename Scalar = double>
DenseMatrix<Scalar> gaussian_matrix(Eigen::Index m, Eigen::Index n, Rng& rng) {
  if (m < 1 || n < 1) throw std::invalid_argument("gaussian_matrix: need m >= 1 and n >= 1");
  DenseMatrix<Scalar> A(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = static_cast<Scalar>(rng.normal());
  return A;
}

template <typename Scalar = double>
DenseMatrix<Scalar> gaussian_matrix(Eigen::Index m, Eigen::Index n, RngSeed seed) {
  Rng rng(seed);
  return gaussian_matrix<Scalar>(m, n, rng);
}

}  // namespace fracsense
