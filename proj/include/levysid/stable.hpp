#pragma once

#include <cstddef>
#include <vector>

#include "levysid/random.hpp"

namespace levysid {

/// Stability index and skewness of an α-stable law; the scale is carried
/// separately. Construction enforces 0 < α < 2 and −1 ≤ β ≤ 1.
class StableShape {
 public:
  StableShape(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const StableShape&, const StableShape&) = default;

 private:
  double alpha_;
  double beta_;
};

/// Per-component Lévy triple (α, β, σ) with the normalising constant k_α
/// of the jump kernel computed once at construction.
class StableParams {
 public:
  StableParams(double alpha, double beta, double sigma);

  double alpha() const noexcept { return shape_.alpha(); }
  double beta() const noexcept { return shape_.beta(); }
  double sigma() const noexcept { return sigma_; }
  double k_alpha() const noexcept { return k_alpha_; }
  const StableShape& shape() const noexcept { return shape_; }

  friend bool operator==(const StableParams& a, const StableParams& b) {
    return a.shape_ == b.shape_ && a.sigma_ == b.sigma_;
  }

 private:
  StableShape shape_;
  double sigma_;
  double k_alpha_;
};

/// Normalising constant of the α-stable jump kernel:
///   α(1−α) / (Γ(2−α) cos(πα/2))  for α ≠ 1,   2/π  for α = 1.
double k_alpha(double alpha);

/// Jump kernel W^{α,β}(ξ) = k_α (1 ± β) / (2 |ξ|^{1+α}), sign of ξ selecting
/// the branch. Throws DomainError at ξ = 0.
double kernel_w(const StableShape& shape, double xi);

/// Lévy-measure mass of [c1, c2) for the scaled kernel σ⁻¹W(σ⁻¹y). The
/// interval must lie strictly on one side of the origin.
double bin_mass(const StableParams& params, double c1, double c2);

/// Truncated first-moment correction of the drift estimator:
///   σ^α k_α β ε^{1−α} / (1−α)   for α ≠ 1,
///   σ k_1 β ln ε                 for α = 1 (oriented integral over [1, ε]).
double correction_r(const StableParams& params, double epsilon);

/// Truncated second-moment correction of the diffusion estimator. Zero off
/// the diagonal; σ^α k_α ε^{2−α} / (2−α) on it.
double correction_s(const StableParams& params, double epsilon, std::size_t i, std::size_t j);

/// One draw from S_α(scale, β, 0) (Samorodnitsky–Taqqu parametrisation) by
/// the Chambers–Mallows–Stuck transform of one uniform and one exponential.
double draw_stable(const StableShape& shape, double scale, RandomStream& stream);

/// `count` i.i.d. draws from S_α(scale, β, 0).
std::vector<double> sample_stable(const StableShape& shape, double scale, std::size_t count,
                                  RandomStream& stream);

}  // namespace levysid
