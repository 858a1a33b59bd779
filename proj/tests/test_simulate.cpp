#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

#include "levysid/errors.hpp"
#include "levysid/model.hpp"
#include "levysid/parallel.hpp"
#include "levysid/simulate.hpp"
#include "stats.hpp"

using namespace levysid;

namespace {

SdeModel one_dim(const char* drift) {
  SdeModel model;
  model.name = "test";
  model.dimension = 1;
  model.drift = {Expression::parse(drift, 1)};
  return model;
}

struct WorkerGuard {
  ~WorkerGuard() { set_worker_count(0); }
};

}  // namespace

TEST(Grid, Examples) {
  const std::vector<std::pair<double, double>> square{{-2, 2}, {-2, 2}};
  const std::vector<std::size_t> mesh{3, 3};
  const auto g = generate_grid(square, mesh);
  ASSERT_EQ(g.size(), 18u);
  EXPECT_EQ(g[0], -2.0);
  EXPECT_EQ(g[1], -2.0);
  EXPECT_EQ(g[8], 0.0);
  EXPECT_EQ(g[9], 0.0);
  EXPECT_EQ(g[16], 2.0);
  EXPECT_EQ(g[17], 2.0);
  // Last axis fastest.
  EXPECT_EQ(g[2], -2.0);
  EXPECT_EQ(g[3], 0.0);

  const std::vector<std::pair<double, double>> line{{0, 5}};
  const std::vector<std::size_t> one{1};
  EXPECT_EQ(generate_grid(line, one), std::vector<double>{0.0});
}

TEST(Grid, FullLorenzMeshSizeAndCap) {
  const std::vector<std::pair<double, double>> cube(3, {-2.0, 2.0});
  const std::vector<std::size_t> mesh{400, 400, 400};
  // Size arithmetic only; materialising 6.4e7×3 doubles is avoided here.
  EXPECT_THROW(generate_grid(cube, mesh, 1000), ConfigError);
  const std::vector<std::size_t> small{40, 40, 40};
  EXPECT_EQ(generate_grid(cube, small).size(), 3u * 64000u);
}

TEST(Grid, RejectsBadInput) {
  const std::vector<std::pair<double, double>> bad{{1, 0}};
  const std::vector<std::size_t> mesh{3};
  EXPECT_THROW(generate_grid(bad, mesh), ConfigError);
  const std::vector<std::pair<double, double>> ok{{0, 1}};
  const std::vector<std::size_t> zero{0};
  EXPECT_THROW(generate_grid(ok, zero), ConfigError);
}

TEST(Euler, DeterministicExamples) {
  auto decay = one_dim("-x1");
  decay.no_noise = true;
  RandomStream stream(0, 0);
  const auto x = euler_pair_step(decay, std::vector<double>{1.0}, 0.001, stream);
  EXPECT_DOUBLE_EQ(x[0], 0.999);

  auto lorenz = lorenz3d_model();
  lorenz.no_noise = true;
  const auto y = euler_pair_step(lorenz, std::vector<double>{1, 1, 1}, 0.001, stream);
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 1.002);
  EXPECT_NEAR(y[2], 0.9983333333, 1e-10);
}

TEST(Simulate, NoNoiseZeroDriftIsIdentity) {
  auto model = one_dim("0");
  model.no_noise = true;
  const std::vector<double> z{0.0, 1.5, -7.25, 1e300};
  const auto data = simulate_pairs(model, z, 0.01, 3);
  EXPECT_EQ(data.x_data(), z);
}

TEST(Simulate, NoNoiseIncrementIsDriftTimesH) {
  auto model = lorenz3d_model();
  model.no_noise = true;
  const std::vector<std::pair<double, double>> cube(3, {-2.0, 2.0});
  const std::vector<std::size_t> mesh{9, 9, 9};
  const double h = 1e-3;
  const auto data = simulate_pairs(model, generate_grid(cube, mesh), h, 1);
  std::vector<double> b(3);
  for (std::size_t r = 0; r < data.size(); ++r) {
    model.eval_drift(data.z_row(r), b);
    for (int i = 0; i < 3; ++i) {
      const double inc = data.increment(r, i);
      // X − Z is formed after rounding z + hb, so compare to one ulp of x.
      const double tol = std::max(1e-15 * std::abs(h * b[i]),
                                  std::numeric_limits<double>::epsilon() * std::abs(data.x(r, i)));
      ASSERT_NEAR(inc, h * b[i], tol) << r << " " << i;
    }
  }
}

TEST(Simulate, SameSeedIsByteIdenticalAcrossWorkerCounts) {
  WorkerGuard guard;
  const auto model = lorenz3d_model();
  const std::vector<std::pair<double, double>> cube(3, {-2.0, 2.0});
  const std::vector<std::size_t> mesh{45, 45, 45};  // spans several row chunks
  const auto z = generate_grid(cube, mesh);
  set_worker_count(1);
  const auto a = simulate_pairs(model, z, 1e-3, 99);
  set_worker_count(3);
  const auto b = simulate_pairs(model, z, 1e-3, 99);
  set_worker_count(1);
  const auto c = simulate_pairs(model, z, 1e-3, 100);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
}

TEST(Simulate, BrownianCovarianceIsIdentity) {
  SdeModel model;
  model.dimension = 2;
  model.drift = {Expression::parse("0", 2), Expression::parse("0", 2)};
  model.gaussian = {Expression::parse("1", 2), Expression::parse("0", 2),
                    Expression::parse("0", 2), Expression::parse("1", 2)};
  const std::size_t rows = 1'000'000;
  const double h = 1e-3;
  const auto data = simulate_pairs(model, std::vector<double>(2 * rows, 0.0), h, 5);
  double c00 = 0, c01 = 0, c11 = 0, m0 = 0, m1 = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const double u = data.increment(r, 0) / std::sqrt(h);
    const double v = data.increment(r, 1) / std::sqrt(h);
    m0 += u;
    m1 += v;
    c00 += u * u;
    c01 += u * v;
    c11 += v * v;
  }
  const double n = static_cast<double>(rows);
  EXPECT_NEAR(c00 / n - (m0 / n) * (m0 / n), 1.0, 0.02);
  EXPECT_NEAR(c11 / n - (m1 / n) * (m1 / n), 1.0, 0.02);
  EXPECT_NEAR(c01 / n - (m0 / n) * (m1 / n), 0.0, 0.02);
}

TEST(Simulate, PureJumpIncrementsFollowScaledStableLaw) {
  const double h = 1e-3;
  const std::size_t rows = 1'000'000;
  for (const auto& p : {StableParams(0.5, 0.5, 2.0), StableParams(1.0, 0.0, 1.0),
                        StableParams(1.5, -0.5, 0.5)}) {
    auto model = one_dim("0");
    model.levy = {p};
    const auto data = simulate_pairs(model, std::vector<double>(rows, 0.0), h, 8);
    std::vector<double> inc(rows);
    for (std::size_t r = 0; r < rows; ++r) inc[r] = data.increment(r, 0);
    RandomStream stream(12345, 0);
    const auto ref =
        sample_stable(p.shape(), p.sigma() * std::pow(h, 1.0 / p.alpha()), rows, stream);
    EXPECT_LT(levysid::testing::ks_two_sample(inc, ref), 0.003) << p.alpha();
  }
}
