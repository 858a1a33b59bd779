#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "levysid/errors.hpp"
#include "levysid/numeric.hpp"

using namespace levysid;

namespace {

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  DenseMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = g(rng);
  }
  return m;
}

DenseMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  const auto a = random_matrix(n, n, rng);
  DenseMatrix s(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) s(r, c) = 0.5 * (a(r, c) + a(c, r));
  }
  return s;
}

}  // namespace

TEST(LeastSquares, Examples) {
  const DenseMatrix a(2, 2, std::vector<double>{1, 0, 1, 1});
  const auto c = solve_least_squares(a, std::vector<double>{1, 3});
  EXPECT_NEAR(c[0], 1.0, 1e-14);
  EXPECT_NEAR(c[1], 2.0, 1e-14);

  const DenseMatrix ones(2, 1, 1.0);
  EXPECT_NEAR(solve_least_squares(ones, std::vector<double>{0, 2})[0], 1.0, 1e-15);
}

TEST(LeastSquares, RecoversConsistentSystem) {
  std::mt19937_64 rng(11);
  const auto a = random_matrix(200, 10, rng);
  std::vector<double> truth(10);
  for (std::size_t k = 0; k < 10; ++k) truth[k] = static_cast<double>(k) - 4.5;
  std::vector<double> b(200, 0.0);
  for (std::size_t r = 0; r < 200; ++r) {
    for (std::size_t k = 0; k < 10; ++k) b[r] += a(r, k) * truth[k];
  }
  const auto c = solve_least_squares(a, b);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_NEAR(c[k], truth[k], 1e-10);
}

TEST(LeastSquares, MatchesEigenQrAndIsOrthogonal) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_matrix(300, 8, rng);
    const auto b = random_matrix(300, 3, rng);
    Diagnostics diag;
    const auto result = solve_least_squares(a, b, &diag);
    EXPECT_TRUE(diag.empty());
    EXPECT_EQ(result.method, SolveMethod::kNormalEquations);

    const Eigen::MatrixXd ea = to_eigen(a), eb = to_eigen(b);
    const Eigen::MatrixXd oracle = ea.colPivHouseholderQr().solve(eb);
    const Eigen::MatrixXd got = to_eigen(result.coefficients);
    EXPECT_LT((got - oracle).cwiseAbs().maxCoeff(), 1e-10);

    const Eigen::MatrixXd normal = ea.transpose() * (ea * got - eb);
    const double scale = (ea.transpose() * eb).norm();
    EXPECT_LT(normal.norm(), 1e-8 * scale);

    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(result.residual_norms[j], (ea * oracle.col(j) - eb.col(j)).norm(), 1e-9);
    }
  }
}

TEST(LeastSquares, ChunkedAccumulationMatchesSingleBlock) {
  std::mt19937_64 rng(13);
  const auto a = random_matrix(1000, 4, rng);
  const auto b = random_matrix(1000, 1, rng);
  LeastSquaresAccumulator whole(4, 1);
  whole.add_block(a, b);
  std::vector<LeastSquaresAccumulator> parts;
  for (std::size_t start = 0; start < 1000; start += 170) {
    const std::size_t rows = std::min<std::size_t>(170, 1000 - start);
    DenseMatrix pa(rows, 4), pb(rows, 1);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < 4; ++c) pa(r, c) = a(start + r, c);
      pb(r, 0) = b(start + r, 0);
    }
    parts.emplace_back(4, 1);
    parts.back().add_block(pa, pb);
  }
  const auto merged = merge_pairwise(std::move(parts));
  EXPECT_EQ(merged.rows(), 1000u);
  const auto x = whole.solve(), y = merged.solve();
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(x.coefficients(k, 0), y.coefficients(k, 0), 1e-12);
}

TEST(LeastSquares, IllConditionedFallsBackToQrWithWarning) {
  // Columns 1, t, t² on a narrow interval: cond(AᵀA) far above 1e10 while
  // cond(A) stays below the rank-deficiency limit.
  const std::size_t rows = 400;
  DenseMatrix a(rows, 3);
  std::vector<double> b(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double t = 1000.0 + 0.01 * static_cast<double>(r) / rows;
    a(r, 0) = 1.0;
    a(r, 1) = t - 1000.0 + 1e-3;
    a(r, 2) = (t - 1000.0) * (t - 1000.0);
    b[r] = 1.0 + 2.0 * a(r, 1) + 3.0 * a(r, 2);
  }
  Diagnostics diag;
  const auto c = solve_least_squares(a, b, &diag);
  ASSERT_FALSE(diag.empty());
  EXPECT_NE(diag.warnings()[0].find("QR"), std::string::npos) << diag.warnings()[0];
  EXPECT_NEAR(c[0], 1.0, 1e-6);
  EXPECT_NEAR(c[1], 2.0, 1e-3);
  EXPECT_NEAR(c[2], 3.0, 1e-1);
}

TEST(LeastSquares, RankDeficientIsAnError) {
  DenseMatrix a(5, 2);
  for (std::size_t r = 0; r < 5; ++r) {
    a(r, 0) = static_cast<double>(r);
    a(r, 1) = 2.0 * static_cast<double>(r);
  }
  EXPECT_THROW(solve_least_squares(a, std::vector<double>(5, 1.0)), RankDeficientError);
}

TEST(LeastSquares, TooFewRows) {
  DenseMatrix a(2, 3, 1.0);
  EXPECT_THROW(solve_least_squares(a, std::vector<double>{1, 2}), InsufficientDataError);
}

TEST(SymEigen, Examples) {
  const auto id = sym_eigen(DenseMatrix::identity(3));
  for (double v : id.values) EXPECT_NEAR(v, 1.0, 1e-15);
  for (std::size_t c = 0; c < 3; ++c) {
    double norm = 0;
    for (std::size_t r = 0; r < 3; ++r) {
      const double v = std::abs(id.vectors(r, c));
      EXPECT_TRUE(v < 1e-15 || std::abs(v - 1.0) < 1e-15);
      norm += v;
    }
    EXPECT_NEAR(norm, 1.0, 1e-15);
  }

  const auto two = sym_eigen(DenseMatrix(2, 2, std::vector<double>{2, 1, 1, 2}));
  EXPECT_NEAR(two.values[0], 3.0, 1e-14);
  EXPECT_NEAR(two.values[1], 1.0, 1e-14);
  EXPECT_GT(two.vectors(0, 0), 0.0);
  EXPECT_GT(two.vectors(0, 1), 0.0);

  const std::vector<double> d{1, 2, 3};
  const auto diag = sym_eigen(DenseMatrix::diagonal(d));
  EXPECT_EQ(diag.values, (std::vector<double>{3, 2, 1}));
}

TEST(SymEigen, RandomMatricesAgainstEigen) {
  std::mt19937_64 rng(14);
  for (std::size_t n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_symmetric(n, rng);
      const auto e = sym_eigen(a);
      const Eigen::MatrixXd q = to_eigen(e.vectors);
      Eigen::VectorXd lambda(n);
      for (std::size_t k = 0; k < n; ++k) lambda[k] = e.values[k];
      EXPECT_LT((q * lambda.asDiagonal() * q.transpose() - to_eigen(a)).norm(), 1e-12 * (1 + to_eigen(a).norm()));
      EXPECT_LT((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-12);
      for (std::size_t k = 1; k < n; ++k) EXPECT_GE(e.values[k - 1], e.values[k]);

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(to_eigen(a));
      for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(e.values[k], oracle.eigenvalues()[n - 1 - k], 1e-12);
    }
  }
}

TEST(SymEigen, RejectsAsymmetric) {
  EXPECT_THROW(sym_eigen(DenseMatrix(2, 2, std::vector<double>{1, 2, 0, 1})), DomainError);
  EXPECT_THROW(sym_eigen(DenseMatrix(2, 3, 0.0)), DomainError);
}

TEST(SingularValues, AgainstEigen) {
  std::mt19937_64 rng(15);
  const auto a = random_matrix(6, 6, rng);
  const auto s = singular_values(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> oracle(to_eigen(a));
  for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(s[k], oracle.singularValues()[k], 1e-12);
}

TEST(Cholesky, FactorsSpdAndRejectsIndefinite) {
  const DenseMatrix a(2, 2, std::vector<double>{4, 2, 2, 3});
  DenseMatrix l;
  ASSERT_TRUE(cholesky(a, l));
  EXPECT_LT((l * l.transpose() - a).frobenius_norm(), 1e-14);
  EXPECT_EQ(l(0, 1), 0.0);
  EXPECT_FALSE(cholesky(DenseMatrix(2, 2, std::vector<double>{1, 2, 2, 1}), l));
}

TEST(PairwiseSum, ExactOnRepresentableValues) {
  std::vector<double> v(1001);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = static_cast<double>(k);
  EXPECT_EQ(pairwise_sum(v), 500500.0);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(DenseMatrix, RejectsNonFinite) {
  EXPECT_THROW(DenseMatrix(1, 2, std::vector<double>{1, NAN}), DataError);
  EXPECT_THROW(DenseMatrix(1, 2, std::vector<double>{1}), DataError);
}
