#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levysid/errors.hpp"
#include "levysid/random.hpp"
#include "levysid/stable.hpp"
#include "quadrature.hpp"
#include "stats.hpp"

using namespace levysid;
using levysid::testing::ks_statistic;
using levysid::testing::ks_two_sample;
using levysid::testing::log_integral;
using levysid::testing::oracle_k;
using levysid::testing::oracle_r;
using levysid::testing::oracle_s;
using levysid::testing::oracle_w;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(KAlpha, Examples) {
  EXPECT_NEAR(k_alpha(1.0), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(k_alpha(0.5), 0.3989423, 1e-7);
  EXPECT_NEAR(k_alpha(1.0 + 1e-4), 2.0 / kPi, 1e-3);
  EXPECT_NEAR(k_alpha(1.0 - 1e-4), 2.0 / kPi, 1e-3);
}

TEST(KAlpha, PositiveAcrossRange) {
  for (double a = 0.05; a < 2.0; a += 0.05) EXPECT_GT(k_alpha(a), 0.0) << a;
}

TEST(KAlpha, RejectsOutOfRange) {
  EXPECT_THROW(k_alpha(0.0), DomainError);
  EXPECT_THROW(k_alpha(2.0), DomainError);
  EXPECT_THROW(k_alpha(-1.0), DomainError);
  EXPECT_THROW(StableParams(1.5, 1.2, 1.0), DomainError);
  EXPECT_THROW(StableParams(1.5, 0.0, 0.0), DomainError);
}

TEST(KernelW, Examples) {
  EXPECT_NEAR(kernel_w(StableShape(0.5, 0.0), 1.0), 0.1994711, 1e-7);
  for (double a : {0.3, 1.0, 1.7}) {
    for (double xi : {0.1, 1.0, 3.0}) {
      EXPECT_DOUBLE_EQ(kernel_w(StableShape(a, 0.0), xi), kernel_w(StableShape(a, 0.0), -xi));
    }
    EXPECT_EQ(kernel_w(StableShape(a, 1.0), -2.0), 0.0);
  }
  EXPECT_THROW(kernel_w(StableShape(1.0, 0.0), 0.0), DomainError);
}

TEST(BinMass, Examples) {
  const StableParams cauchy(1.0, 0.0, 1.0);
  EXPECT_NEAR(bin_mass(cauchy, 1.0, 5.0), 0.2546479, 1e-7);
  EXPECT_DOUBLE_EQ(bin_mass(cauchy, 1.0, 5.0), bin_mass(cauchy, -5.0, -1.0));
  EXPECT_LT(bin_mass(StableParams(1.3, 0.4, 2.0), 1.0, 1.0 + 1e-12), 1e-10);
  EXPECT_THROW(bin_mass(cauchy, -1.0, 1.0), DomainError);
  EXPECT_THROW(bin_mass(cauchy, 0.0, 1.0), DomainError);
  EXPECT_THROW(bin_mass(cauchy, 2.0, 1.0), DomainError);
}

TEST(BinMass, AdditiveOverAdjacentIntervals) {
  for (double a : {0.3, 0.7, 1.0, 1.3, 1.7}) {
    for (double b : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const StableParams p(a, b, 1.5);
      for (double sign : {1.0, -1.0}) {
        const double c1 = 0.7, c2 = 1.9, c3 = 6.1;
        double lhs, rhs;
        if (sign > 0) {
          lhs = bin_mass(p, c1, c2) + bin_mass(p, c2, c3);
          rhs = bin_mass(p, c1, c3);
        } else {
          lhs = bin_mass(p, -c2, -c1) + bin_mass(p, -c3, -c2);
          rhs = bin_mass(p, -c3, -c1);
        }
        EXPECT_NEAR(lhs, rhs, 1e-12);
      }
    }
  }
}

TEST(BinMass, MatchesKernelQuadrature) {
  for (double a : {0.5, 1.0, 1.5}) {
    const StableParams p(a, 0.3, 0.8);
    auto w = [&](double y) { return oracle_w(a, 0.3, y / 0.8) / 0.8; };
    const double pos = log_integral(w, 0.5, 4.0);
    EXPECT_NEAR(bin_mass(p, 0.5, 4.0), pos, 1e-10 * pos);
  }
}

TEST(CorrectionR, Examples) {
  EXPECT_EQ(correction_r(StableParams(0.7, 0.0, 2.0), 0.5), 0.0);
  EXPECT_EQ(correction_r(StableParams(1.0, 0.8, 2.0), 1.0), 0.0);
  EXPECT_NEAR(correction_r(StableParams(0.5, 0.5, 2.0), 1.0), 0.5641896, 1e-7);
  EXPECT_THROW(correction_r(StableParams(0.5, 0.5, 2.0), 0.0), DomainError);
}

TEST(CorrectionS, Examples) {
  const StableParams p(1.5, 0.3, 0.5);
  EXPECT_EQ(correction_s(p, 1.0, 0, 1), 0.0);
  EXPECT_DOUBLE_EQ(correction_s(p, 0.7, 2, 2), correction_s(StableParams(1.5, -0.3, 0.5), 0.7, 2, 2));
  EXPECT_NEAR(correction_s(p, 1.0, 0, 0), std::pow(0.5, 1.5) * oracle_k(1.5) / 0.5, 1e-14);
  EXPECT_THROW(correction_s(p, -1.0, 0, 0), DomainError);
}

TEST(Corrections, MatchQuadratureOverGrid) {
  for (double a : {0.3, 0.7, 1.0, 1.3, 1.7}) {
    for (double b : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      for (double s : {0.5, 1.0, 2.0}) {
        for (double eps : {0.5, 1.0, 2.0}) {
          const StableParams p(a, b, s);
          const double r = oracle_r(a, b, s, eps);
          const double q = oracle_s(a, b, s, eps);
          EXPECT_NEAR(correction_r(p, eps), r, 1e-8 * std::abs(r) + 1e-14) << a << " " << b << " " << s << " " << eps;
          EXPECT_NEAR(correction_s(p, eps, 0, 0), q, 1e-8 * q) << a << " " << b << " " << s << " " << eps;
        }
      }
    }
  }
}

TEST(Sampler, CauchyKs) {
  RandomStream stream(101, 0);
  const auto draws = sample_stable(StableShape(1.0, 0.0), 1.0, 200000, stream);
  // 1.63/√n is the 1% critical value of the one-sample statistic.
  EXPECT_LT(ks_statistic(draws, levysid::testing::cauchy_cdf), 1.63 / std::sqrt(200000.0));
}

TEST(Sampler, SymmetricMedianNearZero) {
  for (double a : {0.5, 1.0, 1.5}) {
    RandomStream stream(202, 0);
    auto draws = sample_stable(StableShape(a, 0.0), 1.0, 200001, stream);
    std::nth_element(draws.begin(), draws.begin() + 100000, draws.end());
    EXPECT_NEAR(draws[100000], 0.0, 0.02) << a;
  }
}

TEST(Sampler, ScaleIsMultiplicativeAwayFromAlphaOne) {
  RandomStream a(7, 0), b(7, 0);
  const StableShape shape(1.5, -0.5);
  for (int i = 0; i < 100; ++i) {
    EXPECT_NEAR(draw_stable(shape, 3.0, a), 3.0 * draw_stable(shape, 1.0, b), 1e-12);
  }
}

TEST(Sampler, SkewedAlphaOneIsSelfSimilarUnderSums) {
  // Sums of k draws of S_1(δ, β, 0) must match S_1(kδ, β, 0) with no extra
  // shift; this pins down the log term of the α = 1 transform.
  const StableShape shape(1.0, 0.5);
  const std::size_t n = 100000, k = 4;
  RandomStream s1(303, 0), s2(303, 1);
  std::vector<double> sums(n), single = sample_stable(shape, static_cast<double>(k), n, s2);
  for (auto& v : sums) {
    for (std::size_t j = 0; j < k; ++j) v += draw_stable(shape, 1.0, s1);
  }
  EXPECT_LT(ks_two_sample(sums, single), 1.63 * std::sqrt(2.0 / n));
}

TEST(Sampler, SelfSimilarForOtherAlphas) {
  for (double a : {0.5, 1.5}) {
    for (double b : {0.0, -0.5}) {
      const StableShape shape(a, b);
      const std::size_t n = 100000, k = 3;
      RandomStream s1(404, 0), s2(404, 1);
      std::vector<double> sums(n);
      const auto single = sample_stable(shape, std::pow(double(k), 1.0 / a), n, s2);
      for (auto& v : sums) {
        for (std::size_t j = 0; j < k; ++j) v += draw_stable(shape, 1.0, s1);
      }
      EXPECT_LT(ks_two_sample(sums, single), 1.63 * std::sqrt(2.0 / n)) << a << " " << b;
    }
  }
}

TEST(Sampler, TailAsymmetryFollowsBeta) {
  // Upper-to-total tail mass tends to (1+β)/2.
  RandomStream stream(505, 0);
  const double beta = 0.5;
  const auto draws = sample_stable(StableShape(0.8, beta), 1.0, 400000, stream);
  double up = 0, down = 0;
  for (double v : draws) {
    if (v > 200.0) ++up;
    if (v < -200.0) ++down;
  }
  EXPECT_NEAR(up / (up + down), (1.0 + beta) / 2.0, 0.04);
}

TEST(Sampler, RejectsBadScale) {
  RandomStream stream(1, 0);
  EXPECT_THROW(sample_stable(StableShape(1.0, 0.0), 0.0, 10, stream), DomainError);
}
