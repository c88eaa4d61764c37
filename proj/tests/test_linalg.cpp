#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "fracsense/linalg.hpp"
#include "oracles.hpp"

namespace fracsense {
namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) A(i, j++) = v;
    ++i;
  }
  return A;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST(Matvec, HandExamples) {
  EXPECT_EQ(matvec(Matrix(Matrix::Identity(2, 2)), vec({3, -1})), vec({3, -1}));
  EXPECT_EQ(matvec(mat({{1, 2}, {0, 1}}), vec({1, 1})), vec({3, 1}));
  EXPECT_EQ(matvec(Matrix(Matrix::Zero(1, 3)), vec({5, 6, 7})), vec({0}));
}

TEST(Matvec, DimensionMismatch) {
  EXPECT_THROW(matvec(mat({{1, 2}}), vec({1, 2, 3})), DimensionError);
  EXPECT_THROW(matvec_transpose(mat({{1, 2}}), vec({1, 2})), DimensionError);
}

TEST(MatvecTranspose, HandExamples) {
  EXPECT_EQ(matvec_transpose(Matrix(Matrix::Identity(2, 2)), vec({1, 2})), vec({1, 2}));
  EXPECT_EQ(matvec_transpose(mat({{1, 2}, {0, 1}}), vec({1, 0})), vec({1, 2}));
  EXPECT_EQ(matvec_transpose(mat({{1, 1, 1}}), vec({2})), vec({2, 2, 2}));
}

TEST(MatvecTranspose, AgreesWithExplicitNormalMatrix) {
  Rng rng(RngSeed{101});
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = gaussian_matrix(5, 8, rng);
    Vector x(8);
    for (auto& v : x) v = rng.normal();
    const Vector lhs = matvec_transpose(A, matvec(A, x));
    Eigen::MatrixXd AtA = Eigen::MatrixXd::Zero(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 5; ++k) AtA(i, j) += A(k, i) * A(k, j);
    const Vector rhs = AtA * x;
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
  }
}

TEST(SpectralNorm, SmallExamples) {
  EXPECT_NEAR(spectral_norm_sq(mat({{3, 0}, {0, 1}})), 9.0, 1e-8);
  EXPECT_NEAR(spectral_norm_sq(Matrix(Matrix::Identity(2, 2))), 1.0, 1e-8);
  EXPECT_NEAR(spectral_norm_sq(mat({{1, 0, 0}, {0, 2, 0}})), 4.0, 1e-8);
}

TEST(SpectralNorm, CharacteristicPolynomialOracleOnTwoRowMatrices) {
  // A A^T is 2x2 and shares its largest eigenvalue with A^T A.
  Rng rng(RngSeed{5});
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix A = gaussian_matrix(2, 3, rng);
    const double expected = testing::largest_eig_2x2(A.row(0).squaredNorm(), A.row(0).dot(A.row(1)),
                                                     A.row(1).squaredNorm());
    EXPECT_NEAR(spectral_norm_sq(A), expected, 1e-8 * expected);
  }
}

TEST(SpectralNorm, MatchesDenseEigensolver) {
  const Matrix A = gaussian_matrix(10, 20, RngSeed{2024});
  const Eigen::MatrixXd AtA = A.transpose() * A;
  const double expected = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(AtA).eigenvalues().maxCoeff();
  EXPECT_NEAR(spectral_norm_sq(A), expected, 1e-7 * expected);
}

TEST(SpectralNorm, UpperBoundsRayleighQuotients) {
  const Matrix A = gaussian_matrix(10, 20, RngSeed{77});
  const PowerIterationOptions opts;
  const double est = spectral_norm_sq(A, opts);
  Rng rng(RngSeed{78});
  for (int k = 0; k < 100; ++k) {
    Vector x(20);
    for (auto& v : x) v = rng.normal();
    x.normalize();
    EXPECT_LE((A * x).squaredNorm(), est * (1.0 + opts.tol));
  }
}

TEST(SpectralNorm, Errors) {
  EXPECT_THROW(spectral_norm_sq(Matrix(Matrix::Zero(2, 3))), std::invalid_argument);
  PowerIterationOptions bad;
  bad.tol = 0;
  EXPECT_THROW(spectral_norm_sq(Matrix(Matrix::Identity(2, 2)), bad), std::invalid_argument);
  bad = {};
  bad.max_iter = 0;
  EXPECT_THROW(spectral_norm_sq(Matrix(Matrix::Identity(2, 2)), bad), std::invalid_argument);
}

TEST(SpectralNorm, Pure) {
  const Matrix A = gaussian_matrix(7, 9, RngSeed{1});
  EXPECT_EQ(spectral_norm_sq(A), spectral_norm_sq(A));
}

TEST(GaussianMatrix, Statistics) {
  const Matrix A = gaussian_matrix(100, 256, RngSeed{42});
  const double mn = 100.0 * 256.0;
  const double mean = A.mean();
  const double var = (A.array() - mean).square().sum() / (mn - 1);
  EXPECT_LE(std::abs(mean), 4.0 / std::sqrt(mn));
  EXPECT_NEAR(var, 1.0, 0.1);
  EXPECT_TRUE(A.allFinite());
}

TEST(GaussianMatrix, DeterministicUnderSeed) {
  const Matrix A = gaussian_matrix(30, 40, RngSeed{9});
  const Matrix B = gaussian_matrix(30, 40, RngSeed{9});
  EXPECT_EQ(0, std::memcmp(A.data(), B.data(), sizeof(double) * A.size()));
  EXPECT_NE(A, gaussian_matrix(30, 40, RngSeed{10}));
}

TEST(GaussianMatrix, Degenerate) {
  const Matrix A = gaussian_matrix(1, 1, RngSeed{0});
  ASSERT_EQ(A.size(), 1);
  EXPECT_TRUE(std::isfinite(A(0, 0)));
  EXPECT_THROW(gaussian_matrix(0, 3, RngSeed{0}), std::invalid_argument);
}

}  // namespace
}  // namespace fracsense
