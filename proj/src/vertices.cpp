#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracsense/errors.hpp"
#include "fracsense/lp.hpp"
#include "fracsense/penalty.hpp"

namespace fracsense {

namespace {

constexpr double kDuplicateTol = 1e-9;

double binomial(Eigen::Index n, Eigen::Index k) {
  double out = 1.0;
  for (Eigen::Index i = 1; i <= k; ++i)
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

// Gaussian elimination with partial pivoting; false when a pivot falls below pivot_tol.
bool solve_square(Eigen::MatrixXd M, Eigen::VectorXd rhs, double pivot_tol, Eigen::VectorXd& x) {
  const Eigen::Index m = M.rows();
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::Index p;
    const double piv = M.col(k).tail(m - k).cwiseAbs().maxCoeff(&p);
    if (piv < pivot_tol) return false;
    p += k;
    if (p != k) {
      M.row(k).swap(M.row(p));
      std::swap(rhs(k), rhs(p));
    }
    for (Eigen::Index i = k + 1; i < m; ++i) {
      const double f = M(i, k) / M(k, k);
      M.row(i).tail(m - k) -= f * M.row(k).tail(m - k);
      rhs(i) -= f * rhs(k);
    }
  }
  x.resize(m);
  for (Eigen::Index i = m - 1; i >= 0; --i) {
    const double s = M.row(i).tail(m - 1 - i).dot(x.tail(m - 1 - i));
    x(i) = (rhs(i) - s) / M(i, i);
  }
  return true;
}

bool next_combination(std::vector<Eigen::Index>& idx, Eigen::Index n) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  for (Eigen::Index i = k - 1; i >= 0; --i) {
    auto& slot = idx[static_cast<std::size_t>(i)];
    if (slot < n - k + i) {
      ++slot;
      for (Eigen::Index j = i + 1; j < k; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

std::vector<Eigen::Index> support_of(const Vector& v) {
  std::vector<Eigen::Index> s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > kNonzeroThreshold) s.push_back(i);
  return s;
}

}  // namespace

VertexSet::VertexSet(std::vector<Vector> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.empty()) return;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  Eigen::Index l0 = std::numeric_limits<Eigen::Index>::max();
  for (const Vector& v : vertices_) {
    l0 = std::min(l0, count_nonzeros(v));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (v(i) > kNonzeroThreshold) {
        lo = std::min(lo, v(i));
        hi = std::max(hi, v(i));
      }
    }
  }
  min_l0_ = l0;
  // A vertex set whose only point is 0 (b = 0) has no positive coordinate.
  if (std::isfinite(lo)) {
    r_const_ = lo;
    big_r_const_ = hi;
  }
}

double VertexSet::r_const() const {
  if (!r_const_) throw std::logic_error("VertexSet: r(A,b) undefined without a positive vertex");
  return *r_const_;
}

double VertexSet::R_const() const {
  if (!big_r_const_) throw std::logic_error("VertexSet: R(A,b) undefined without a positive vertex");
  return *big_r_const_;
}

Eigen::Index VertexSet::min_l0() const {
  if (!min_l0_) throw std::logic_error("VertexSet: empty");
  return *min_l0_;
}

double VertexSet::a_star() const {
  return static_cast<double>(min_l0()) / r_const();
}

VertexSet enumerate_vertices(const Matrix& A, const Vector& b, double feas_tol,
                             const VertexEnumerationLimits& limits) {
  detail::require_dims(A.rows() == b.size(), "enumerate_vertices: A.rows() != b.size()");
  if (!(feas_tol > 0)) throw std::invalid_argument("enumerate_vertices: feas_tol must be positive");
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (m < 1 || m > n) throw std::invalid_argument("enumerate_vertices: need 1 <= m <= n");
  if (n > limits.max_cols || binomial(n, m) > limits.max_subsets)
    throw std::invalid_argument("enumerate_vertices: instance exceeds the combinatorial guard");

  std::vector<Vector> kept;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;

  Eigen::MatrixXd B(m, m);
  Eigen::VectorXd xb;
  do {
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A.col(idx[static_cast<std::size_t>(i)]);
    if (!solve_square(B, b, limits.pivot_tol, xb)) continue;
    if ((xb.array() < -feas_tol).any()) continue;

    Vector v = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) v(idx[static_cast<std::size_t>(i)]) = std::max(0.0, xb(i));
    if ((A * v - b).norm() > feas_tol) continue;

    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Vector& w) {
      return (w - v).cwiseAbs().maxCoeff() <= kDuplicateTol;
    });
    if (!duplicate) kept.push_back(std::move(v));
  } while (next_combination(idx, n));

  return VertexSet(std::move(kept));
}

Vector least_fraction_vertex(const VertexSet& vs, double a) {
  if (vs.empty()) throw std::invalid_argument("least_fraction_vertex: empty vertex set");
  if (!(a > 0)) throw std::invalid_argument("least_fraction_vertex: a must be positive");

  const auto& verts = vs.vertices();
  std::size_t best = 0;
  double best_p = penalty(a, verts[0]);
  for (std::size_t i = 1; i < verts.size(); ++i) {
    const double p = penalty(a, verts[i]);
    const double slack = 1e-12 * std::max(1.0, std::abs(best_p));
    if (p < best_p - slack) {
      best = i;
      best_p = p;
    } else if (p <= best_p + slack && support_of(verts[i]) < support_of(verts[best])) {
      best = i;
      best_p = std::min(best_p, p);
    }
  }
  return verts[best];
}

}  // namespace fracsense
