#include "levysid/model.hpp"

#include <algorithm>

#include "levysid/errors.hpp"

namespace levysid {

void SdeModel::validate() const {
  if (dimension == 0) throw ConfigError("model dimension must be at least 1");
  if (drift.size() != dimension) {
    throw ConfigError("drift: expected " + std::to_string(dimension) + " expressions, got " +
                      std::to_string(drift.size()));
  }
  if (!gaussian.empty() && gaussian.size() != dimension * dimension) {
    throw ConfigError("gaussian: expected a " + std::to_string(dimension) + "x" +
                      std::to_string(dimension) + " matrix");
  }
  if (!levy.empty() && levy.size() != dimension) {
    throw ConfigError("levy: expected " + std::to_string(dimension) + " components, got " +
                      std::to_string(levy.size()));
  }
  auto check_dim = [&](const Expression& e, const std::string& where) {
    if (e.dimension() != dimension) throw ConfigError(where + ": expression dimension mismatch");
  };
  for (std::size_t i = 0; i < drift.size(); ++i) check_dim(drift[i], "drift[" + std::to_string(i) + "]");
  for (std::size_t i = 0; i < gaussian.size(); ++i) check_dim(gaussian[i], "gaussian");
}

void SdeModel::eval_drift(std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < dimension; ++i) {
    try {
      out[i] = drift[i].evaluate(x);
    } catch (const DomainError& e) {
      throw DomainError("drift component " + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

void SdeModel::eval_gaussian(std::span<const double> x, std::span<double> out) const {
  if (gaussian.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  for (std::size_t k = 0; k < gaussian.size(); ++k) {
    try {
      out[k] = gaussian[k].evaluate(x);
    } catch (const DomainError& e) {
      throw DomainError("gaussian entry (" + std::to_string(k / dimension + 1) + "," +
                        std::to_string(k % dimension + 1) + "): " + e.what());
    }
  }
}

std::vector<double> SdeModel::diffusion_matrix(std::span<const double> x) const {
  const std::size_t n = dimension;
  std::vector<double> lambda(n * n);
  eval_gaussian(x, lambda);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += lambda[i * n + k] * lambda[j * n + k];
      a[i * n + j] = sum;
    }
  }
  return a;
}

namespace {

std::vector<Expression> parse_all(std::initializer_list<const char*> texts, std::size_t n) {
  std::vector<Expression> out;
  for (const char* text : texts) out.push_back(Expression::parse(text, n));
  return out;
}

}  // namespace

SdeModel lorenz3d_model() {
  SdeModel model;
  model.name = "lorenz3d";
  model.dimension = 3;
  model.drift = parse_all({"10*(-x1 + x2)", "4*x1 - x2 - x1*x3", "-8/3*x3 + x1*x2"}, 3);
  model.gaussian = parse_all({"1 + x3", "1", "0",  //
                              "0", "x2", "0",      //
                              "0", "0", "x1"},
                             3);
  model.levy = {StableParams(0.5, 0.5, 2.0), StableParams(1.0, 0.0, 1.0),
                StableParams(1.5, -0.5, 0.5)};
  return model;
}

SdeModel genereg1d_model() {
  SdeModel model;
  model.name = "genereg1d";
  model.dimension = 1;
  // k_f = 6, K_d = 10, k_d = 1, R_bas = 0.4
  model.drift = parse_all({"6*x1^2/(x1^2 + 10) - x1 + 0.4"}, 1);
  model.gaussian = parse_all({"x1/sqrt(x1^2 + 0.5)"}, 1);
  model.levy = {StableParams(1.5, -0.5, 0.5)};
  return model;
}

}  // namespace levysid
