#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "levysid/expression.hpp"
#include "levysid/stable.hpp"

namespace levysid {

/// dx = b(x) dt + Λ(x) dB + σ dL with independent α-stable components.
///
/// `gaussian` holds Λ row-major (n×n) or is empty for no Brownian part;
/// `levy` holds one StableParams per component (σ_i inside) or is empty
/// when the jump part is switched off. `no_noise` silences both and exists
/// for deterministic checks only.
struct SdeModel {
  std::string name;
  std::size_t dimension = 0;
  std::vector<Expression> drift;
  std::vector<Expression> gaussian;
  std::vector<StableParams> levy;
  bool no_noise = false;

  bool has_gaussian() const noexcept { return !no_noise && !gaussian.empty(); }
  bool has_levy() const noexcept { return !no_noise && !levy.empty(); }

  /// Checks shape consistency; throws ConfigError.
  void validate() const;

  /// b(x) into `out` (size n).
  void eval_drift(std::span<const double> x, std::span<double> out) const;
  /// Λ(x) row-major into `out` (size n²); zero matrix when absent.
  void eval_gaussian(std::span<const double> x, std::span<double> out) const;
  /// Diffusion a(x) = Λ(x)Λ(x)ᵀ, row-major n×n.
  std::vector<double> diffusion_matrix(std::span<const double> x) const;
};

/// Stochastic Lorenz system with α = (0.5, 1, 1.5), β = (0.5, 0, −0.5),
/// σ = (2, 1, 0.5).
SdeModel lorenz3d_model();

/// One-dimensional gene regulation model with rational drift,
/// x/√(x²+0.5) Brownian coefficient and S_1.5(·, −0.5, 0) jumps of σ = 0.5.
SdeModel genereg1d_model();

}  // namespace levysid
