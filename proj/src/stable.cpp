#include "levysid/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "levysid/errors.hpp"

namespace levysid {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this distance from 1 the α ≠ 1 branch of k_α loses accuracy to
// cancellation; the function is continuous there, so use the limit.
constexpr double kAlphaOneWindow = 1e-9;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw DomainError("stability index alpha must lie in (0, 2), got " + std::to_string(alpha));
  }
}

}  // namespace

StableShape::StableShape(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  require_alpha(alpha);
  if (!(beta >= -1.0 && beta <= 1.0)) {
    throw DomainError("skewness beta must lie in [-1, 1], got " + std::to_string(beta));
  }
}

StableParams::StableParams(double alpha, double beta, double sigma)
    : shape_(alpha, beta), sigma_(sigma), k_alpha_(levysid::k_alpha(alpha)) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("noise intensity sigma must be positive, got " + std::to_string(sigma));
  }
}

double k_alpha(double alpha) {
  require_alpha(alpha);
  if (std::abs(alpha - 1.0) < kAlphaOneWindow) return 2.0 / kPi;
  return alpha * (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::cos(kPi * alpha / 2.0));
}

double kernel_w(const StableShape& shape, double xi) {
  if (xi == 0.0 || !std::isfinite(xi)) {
    throw DomainError("jump kernel is singular at xi = 0");
  }
  const double side = xi > 0.0 ? 1.0 + shape.beta() : 1.0 - shape.beta();
  return k_alpha(shape.alpha()) * side / (2.0 * std::pow(std::abs(xi), 1.0 + shape.alpha()));
}

double bin_mass(const StableParams& params, double c1, double c2) {
  if (!(c1 < c2)) throw DomainError("bin_mass requires c1 < c2");
  const bool positive = c1 > 0.0;
  const bool negative = c2 < 0.0;
  if (!positive && !negative) {
    throw DomainError("bin_mass interval must not touch or straddle 0");
  }
  const double alpha = params.alpha();
  // Mirror negative intervals onto the positive axis.
  const double lo = positive ? c1 : -c2;
  const double hi = positive ? c2 : -c1;
  const double side = positive ? 1.0 + params.beta() : 1.0 - params.beta();
  const double tail = std::isinf(hi) ? std::pow(lo, -alpha)
                                     : std::pow(lo, -alpha) - std::pow(hi, -alpha);
  return std::pow(params.sigma(), alpha) * params.k_alpha() * side * tail / (2.0 * alpha);
}

double correction_r(const StableParams& params, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("correction_r requires epsilon > 0");
  const double alpha = params.alpha();
  if (alpha == 1.0) {
    return params.sigma() * params.k_alpha() * params.beta() * std::log(epsilon);
  }
  return std::pow(params.sigma(), alpha) * params.k_alpha() * params.beta() *
         std::pow(epsilon, 1.0 - alpha) / (1.0 - alpha);
}

double correction_s(const StableParams& params, double epsilon, std::size_t i, std::size_t j) {
  if (!(epsilon > 0.0)) throw DomainError("correction_s requires epsilon > 0");
  if (i != j) return 0.0;
  const double alpha = params.alpha();
  return std::pow(params.sigma(), alpha) * params.k_alpha() * std::pow(epsilon, 2.0 - alpha) /
         (2.0 - alpha);
}

double draw_stable(const StableShape& shape, double scale, RandomStream& stream) {
  const double alpha = shape.alpha();
  const double beta = shape.beta();
  const double v = kPi * (stream.uniform() - 0.5);  // U(-π/2, π/2)
  const double w = stream.exponential();

  if (alpha == 1.0) {
    const double half_pi = kPi / 2.0;
    const double skew = half_pi + beta * v;
    const double x =
        (skew * std::tan(v) - beta * std::log(half_pi * w * std::cos(v) / skew)) / half_pi;
    // S_1(δ, β, 0) = δ X + (2/π) β δ ln δ with X ~ S_1(1, β, 0).
    return scale * x + beta * scale * std::log(scale) / half_pi;
  }

  const double t = beta * std::tan(kPi * alpha / 2.0);
  const double shift = std::atan(t) / alpha;
  const double factor = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const double av = alpha * (v + shift);
  const double x = factor * std::sin(av) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - av) / w, (1.0 - alpha) / alpha);
  return scale * x;
}

std::vector<double> sample_stable(const StableShape& shape, double scale, std::size_t count,
                                  RandomStream& stream) {
  if (!(scale > 0.0)) throw DomainError("stable scale must be positive");
  std::vector<double> out(count);
  for (auto& value : out) value = draw_stable(shape, scale, stream);
  return out;
}

}  // namespace levysid
