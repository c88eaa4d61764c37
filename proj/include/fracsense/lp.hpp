#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "fracsense/linalg.hpp"

namespace fracsense {

inline constexpr double kDefaultFeasTol = 1e-9;
/// Entries with |x_i| <= this count as zero when measuring ||x||_0 of computed points.
inline constexpr double kNonzeroThreshold = 1e-9;

/// Number of entries with |x_i| > threshold.
Eigen::Index count_nonzeros(const Vector& x, double threshold = kNonzeroThreshold);

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  Vector x;
  double objective = 0.0;  // 1^T x
  LpStatus status = LpStatus::Infeasible;
  std::vector<Eigen::Index> basis;  // m column indices when Optimal
  int pivots = 0;
};

/// min 1^T x  s.t.  A x = b, x >= 0, by a two-phase primal simplex on a dense
/// tableau with Bland's rule. A must have full row rank; a redundant row shows
/// up as an artificial that cannot leave the basis and raises InternalError.
/// The optimal point is recomputed from the final basis by an LU solve.
LpSolution solve_lp(const Matrix& A, const Vector& b, double feas_tol = kDefaultFeasTol);

/// Basic feasible solutions (vertices) of {x : A x = b, x >= 0}, with the
/// constants derived from them:
///   r(A,b) = smallest positive coordinate over all vertices
///   R(A,b) = largest coordinate over all vertices
///   a*     = (min ||v||_0 over vertices) / r(A,b)
/// The constant accessors throw std::logic_error on an empty set.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vector> vertices);

  const std::vector<Vector>& vertices() const noexcept { return vertices_; }
  bool empty() const noexcept { return vertices_.empty(); }

  double r_const() const;
  double R_const() const;
  double a_star() const;
  Eigen::Index min_l0() const;

 private:
  std::vector<Vector> vertices_;
  std::optional<double> r_const_;
  std::optional<double> big_r_const_;
  std::optional<Eigen::Index> min_l0_;
};

struct VertexEnumerationLimits {
  Eigen::Index max_cols = 25;
  double max_subsets = 200000;
  /// Absolute pivot below which a basis submatrix counts as singular.
  double pivot_tol = 1e-10;
};

/// Solves every nonsingular m-column basis, keeps the nonnegative solutions
/// (negatives within feas_tol are clamped to zero) and drops duplicates that
/// agree coordinatewise to 1e-9. Vertices are ordered by the lexicographic
/// rank of the first basis that produced them.
VertexSet enumerate_vertices(const Matrix& A, const Vector& b, double feas_tol = kDefaultFeasTol,
                             const VertexEnumerationLimits& limits = {});

/// Vertex with the smallest fraction penalty P_a; near-ties (1e-12 relative)
/// go to the lexicographically smallest support.
Vector least_fraction_vertex(const VertexSet& vs, double a);

}  // namespace fracsense
