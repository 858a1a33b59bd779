#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levysid/basis.hpp"
#include "levysid/dataset.hpp"
#include "levysid/errors.hpp"
#include "levysid/numeric.hpp"
#include "levysid/stable.hpp"

namespace levysid {

/// Binning and cube parameters. `epsilon` is the origin of the geometric
/// jump bins [m^k ε, m^{k+1} ε); the cube Γ = [−ε, ε]^n used for drift and
/// diffusion defaults to the same ε unless `cube_epsilon` is set.
struct EstimationConfig {
  double epsilon = 1.0;
  double m = 5.0;
  std::size_t bins = 2;  // N: bins per side beyond the first
  std::optional<double> cube_epsilon;
  double condition_limit = kNormalEquationsConditionLimit;
  double psd_tolerance = 1e-8;

  double cube_half_width() const noexcept { return cube_epsilon.value_or(epsilon); }
  /// Throws ConfigError unless ε > 0, m > 1, N ≥ 1 and the cube width is positive.
  void validate() const;
};

/// Counts of increments per jump bin: positive[k] covers [m^k ε, m^{k+1} ε),
/// negative[k] covers [−m^{k+1} ε, −m^k ε), k = 0..N.
struct BinCounts {
  std::vector<std::uint64_t> positive;
  std::vector<std::uint64_t> negative;
  std::uint64_t total = 0;  // M
  double h = 0.0;

  std::uint64_t combined(std::size_t k) const { return positive[k] + negative[k]; }
  friend bool operator==(const BinCounts&, const BinCounts&) = default;
};

/// α̂ is clamped into [kAlphaFloor, kAlphaCeiling] when the log-ratio falls
/// outside the admissible range (0, 2).
inline constexpr double kAlphaFloor = 0.01;
inline constexpr double kAlphaCeiling = 1.99;

/// Y_i = X[:, i] − Z[:, i] in row order (0-based component index).
std::vector<double> component_increments(const DatasetPair& data, std::size_t component);

BinCounts bin_counts(std::span<const double> increments, const EstimationConfig& config, double h);

/// Mean over usable k ∈ 1..N of ln[(n_0⁺+n_0⁻)/(n_k⁺+n_k⁻)] / (k ln m). Bins
/// that are empty are skipped with a warning; `per_bin`, if given, receives
/// the individual estimates (nullopt for skipped k). Throws
/// InsufficientDataError when no k is usable.
double estimate_alpha(const BinCounts& counts, const EstimationConfig& config, Diagnostics& diagnostics,
                      std::vector<std::optional<double>>* per_bin = nullptr);

/// β = (1−ρ)/(1+ρ), ρ = Σn_k⁻ / Σn_k⁺.
double estimate_beta(const BinCounts& counts);

/// Mean over non-empty k ∈ 0..N of
/// [α ε^α m^{kα} (n_k⁺+n_k⁻) / (k_α h M (1 − m^{−α}))]^{1/α}.
double estimate_sigma(const BinCounts& counts, double alpha_hat, const EstimationConfig& config,
                      Diagnostics& diagnostics, std::vector<std::optional<double>>* per_bin = nullptr);

struct LevyEstimate {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  BinCounts counts;
  std::vector<std::optional<double>> alpha_per_bin;  // k = 1..N
  std::vector<std::optional<double>> sigma_per_bin;  // k = 0..N

  StableParams params() const { return {alpha, beta, sigma}; }
};

/// Jump-law identification for one component from its increments alone.
LevyEstimate identify_levy(const DatasetPair& data, std::size_t component,
                           const EstimationConfig& config, Diagnostics& diagnostics);

struct CubeFilterResult {
  DatasetPair data;
  double survival_fraction = 0.0;  // M̂ / M
};

/// Keeps rows with max_i |x_i − z_i| ≤ half_width, in original order.
/// Throws InsufficientDataError when nothing survives.
CubeFilterResult cube_filter(const DatasetPair& data, double half_width);

struct RegressionResult {
  std::vector<std::vector<double>> coefficients;  // one K-vector per target
  std::vector<double> residual_rms;               // ‖A c − B‖ / √M̂ per target
  double condition = 0.0;                         // cond(AᵀA)
  SolveMethod method = SolveMethod::kNormalEquations;
};

/// Position of (i, j), i ≤ j, in the upper-triangular diffusion ordering
/// (0,0), (0,1), …, (0,n−1), (1,1), …
std::size_t upper_index(std::size_t i, std::size_t j, std::size_t n);

/// Drift coefficients c_i from the cube-filtered pairs: target row j is
/// (M̂/M) h⁻¹ (x̂_ij − ẑ_ij) − R_i(ε). `levy` supplies the per-component
/// laws used for R; pass an empty span to drop the correction.
RegressionResult drift_regression(const DatasetPair& filtered, double fraction,
                                  const BasisDictionary& dict, std::span<const StableParams> levy,
                                  const EstimationConfig& config, Diagnostics& diagnostics);

/// Diffusion coefficients d_ij (i ≤ j) with targets
/// (M̂/M) h⁻¹ (x̂_i − ẑ_i)(x̂_j − ẑ_j) − S_ij(ε).
RegressionResult diffusion_regression(const DatasetPair& filtered, double fraction,
                                      const BasisDictionary& dict, std::span<const StableParams> levy,
                                      const EstimationConfig& config, Diagnostics& diagnostics);

/// Both regressions over a single design-matrix pass.
std::pair<RegressionResult, RegressionResult> drift_diffusion_regression(
    const DatasetPair& filtered, double fraction, const BasisDictionary& dict,
    std::span<const StableParams> levy, const EstimationConfig& config, Diagnostics& diagnostics);

/// Learned expansions b_i ≈ Σ c_ik ψ_k and a_ij ≈ Σ d_ijk ψ_k. Diffusion is
/// stored for i ≤ j and read back symmetrically.
class CoefficientTable {
 public:
  CoefficientTable(BasisDictionary dictionary, std::vector<std::vector<double>> drift,
                   std::vector<std::vector<double>> diffusion, double survival_fraction);

  const BasisDictionary& dictionary() const noexcept { return dictionary_; }
  std::size_t dimension() const noexcept { return dictionary_.dimension(); }
  double survival_fraction() const noexcept { return survival_fraction_; }

  const std::vector<double>& drift(std::size_t i) const { return drift_.at(i); }
  const std::vector<double>& diffusion(std::size_t i, std::size_t j) const;
  const std::vector<std::vector<double>>& drift_rows() const noexcept { return drift_; }
  const std::vector<std::vector<double>>& diffusion_rows() const noexcept { return diffusion_; }

  double evaluate_drift(std::size_t i, std::span<const double> x) const;
  double evaluate_diffusion(std::size_t i, std::size_t j, std::span<const double> x) const;
  /// Learned a(x) as a symmetric n×n matrix.
  DenseMatrix diffusion_matrix(std::span<const double> x) const;

 private:
  BasisDictionary dictionary_;
  std::vector<std::vector<double>> drift_;
  std::vector<std::vector<double>> diffusion_;
  double survival_fraction_;
};

/// Λ = Q√J from a = QJQᵀ. Eigenvalues in [−tolerance, 0) are clamped to 0;
/// anything below −tolerance raises DomainError (inconsistent estimate).
DenseMatrix factor_diffusion(const DenseMatrix& a, double tolerance);

struct IdentificationResult {
  std::vector<LevyEstimate> levy;
  double survival_fraction = 0.0;
  std::size_t retained_rows = 0;
  RegressionResult drift;
  RegressionResult diffusion;
  CoefficientTable table;
  std::vector<std::string> warnings;
};

/// Full identification: jump law per component, cube filter, then drift
/// and diffusion regression with the estimated corrections.
IdentificationResult identify(const DatasetPair& data, const BasisDictionary& dict,
                              const EstimationConfig& config);

}  // namespace levysid
