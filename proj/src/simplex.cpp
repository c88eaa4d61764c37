#include <cmath>
#include <stdexcept>
#include <string>

#include "fracsense/errors.hpp"
#include "fracsense/lp.hpp"

namespace fracsense {

Eigen::Index count_nonzeros(const Vector& x, double threshold) {
  return (x.array().abs() > threshold).count();
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
// Basic values below this (including small negatives from rounding) are reset
// to exact zero, so degenerate ties stay ties and ratios stay nonnegative.
constexpr double kZeroRhs = 1e-11;

// Dense tableau over [A | I_artificial | rhs] with the reduced-cost row kept
// separately. Columns >= n are artificial.
class Tableau {
 public:
  Tableau(const Matrix& A, const Vector& b)
      : m_(A.rows()), n_(A.cols()), rows_(A.rows(), A.cols() + A.rows() + 1), basis_(A.rows()) {
    rows_.setZero();
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = b(i) < 0 ? -1.0 : 1.0;
      rows_.row(i).head(n_) = sign * A.row(i);
      rows_(i, n_ + i) = 1.0;
      rows_(i, rhs_col()) = sign * b(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
  }

  Eigen::Index rhs_col() const { return n_ + m_; }

  // Sets the cost vector and rebuilds reduced costs d_j = c_j - c_B^T T_j.
  void set_costs(const Eigen::VectorXd& c) {
    reduced_ = c;
    value_ = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double cb = c(basis_[static_cast<std::size_t>(i)]);
      if (cb == 0.0) continue;
      reduced_ -= cb * rows_.row(i).head(n_ + m_).transpose();
      value_ += cb * rows_(i, rhs_col());
    }
  }

  // Runs Bland's rule over columns [0, allowed_cols). Returns false if unbounded.
  bool optimize(Eigen::Index allowed_cols, int& pivots, long cap) {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed_cols; ++j) {
        if (reduced_(j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best_ratio = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double coef = rows_(i, enter);
        if (coef <= kPivotTol) continue;
        const double ratio = rows_(i, rhs_col()) / coef;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
      if (++pivots > cap)
        throw InternalError("solve_lp: pivot cap of " + std::to_string(cap) + " exceeded");
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    rows_.row(row) /= rows_(row, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = rows_(i, col);
      if (f != 0.0) rows_.row(i) -= f * rows_.row(row);
      if (rows_(i, rhs_col()) < kZeroRhs) rows_(i, rhs_col()) = 0.0;
    }
    const double f = reduced_(col);
    if (f != 0.0) {
      reduced_ -= f * rows_.row(row).head(n_ + m_).transpose();
      value_ += f * rows_(row, rhs_col());
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Pivots basic artificials (at zero level after phase 1) onto original columns.
  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      Eigen::Index best = -1;
      double best_abs = kPivotTol;
      for (Eigen::Index j = 0; j < n_; ++j) {
        const double v = std::abs(rows_(i, j));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best < 0)
        throw InternalError("solve_lp: redundant constraint row " + std::to_string(i) +
                            " (A is not full row rank)");
      pivot(i, best);
    }
  }

  double value() const { return value_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  Eigen::MatrixXd rows_;
  Eigen::VectorXd reduced_;
  double value_ = 0.0;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpSolution solve_lp(const Matrix& A, const Vector& b, double feas_tol) {
  detail::require_dims(A.rows() == b.size(), "solve_lp: A.rows() != b.size()");
  if (!(feas_tol > 0)) throw std::invalid_argument("solve_lp: feas_tol must be positive");
  if (A.rows() == 0 || A.cols() == 0) throw std::invalid_argument("solve_lp: empty matrix");

  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  const long cap = static_cast<long>(m) * static_cast<long>(n) * 1000L;

  LpSolution out;
  Tableau tab(A, b);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  tab.set_costs(phase1);
  tab.optimize(n + m, out.pivots, cap);
  if (tab.value() > feas_tol * std::max(1.0, b.lpNorm<1>())) {
    out.status = LpStatus::Infeasible;
    out.x = Vector::Zero(n);
    return out;
  }
  tab.drive_out_artificials();

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n).setOnes();
  tab.set_costs(phase2);
  if (!tab.optimize(n, out.pivots, cap)) {
    out.status = LpStatus::Unbounded;
    out.x = Vector::Zero(n);
    return out;
  }

  out.basis = tab.basis();
  Eigen::MatrixXd B(m, m);
  for (Eigen::Index i = 0; i < m; ++i) B.col(i) = A.col(out.basis[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd xb = B.partialPivLu().solve(b);
  out.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i)
    out.x(out.basis[static_cast<std::size_t>(i)]) = std::max(0.0, xb(i));
  out.objective = out.x.sum();
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace fracsense
