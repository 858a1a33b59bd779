#include "levysid/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levysid/parallel.hpp"

namespace levysid {

void EstimationConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (!(m > 1.0) || !std::isfinite(m)) throw ConfigError("m must be greater than 1");
  if (bins < 1) throw ConfigError("N must be at least 1");
  if (cube_epsilon && (!(*cube_epsilon > 0.0) || !std::isfinite(*cube_epsilon))) {
    throw ConfigError("cube_epsilon must be positive");
  }
  if (!(condition_limit > 0.0)) throw ConfigError("condition_limit must be positive");
  if (!(psd_tolerance >= 0.0)) throw ConfigError("psd_tolerance must be nonnegative");
}

std::vector<double> component_increments(const DatasetPair& data, std::size_t component) {
  if (component >= data.dimension()) {
    throw DomainError("component index " + std::to_string(component) + " out of range for dimension " +
                      std::to_string(data.dimension()));
  }
  std::vector<double> y(data.size());
  for (std::size_t r = 0; r < y.size(); ++r) y[r] = data.increment(r, component);
  return y;
}

BinCounts bin_counts(std::span<const double> increments, const EstimationConfig& config, double h) {
  config.validate();
  const std::size_t bins = config.bins + 1;
  std::vector<double> edges(bins + 1);
  edges[0] = config.epsilon;
  for (std::size_t k = 1; k <= bins; ++k) edges[k] = edges[k - 1] * config.m;

  const std::size_t rows = increments.size();
  const std::size_t chunks = chunk_count(rows);
  std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(2 * bins, 0));
  parallel_for_chunks(chunks, [&](std::size_t c) {
    auto& local = partial[c];
    const std::size_t end = std::min(rows, (c + 1) * kRowChunk);
    for (std::size_t r = c * kRowChunk; r < end; ++r) {
      const double y = increments[r];
      const double magnitude = std::abs(y);
      if (magnitude < edges[0] || magnitude > edges[bins]) continue;
      for (std::size_t k = 0; k < bins; ++k) {
        // Positive bins are [e_k, e_{k+1}), negative ones [−e_{k+1}, −e_k).
        if (y > 0.0 && y >= edges[k] && y < edges[k + 1]) {
          ++local[k];
          break;
        }
        if (y < 0.0 && y >= -edges[k + 1] && y < -edges[k]) {
          ++local[bins + k];
          break;
        }
      }
    }
  });

  BinCounts counts;
  counts.positive.assign(bins, 0);
  counts.negative.assign(bins, 0);
  for (const auto& local : partial) {
    for (std::size_t k = 0; k < bins; ++k) {
      counts.positive[k] += local[k];
      counts.negative[k] += local[bins + k];
    }
  }
  counts.total = rows;
  counts.h = h;
  return counts;
}

double estimate_alpha(const BinCounts& counts, const EstimationConfig& config, Diagnostics& diagnostics,
                      std::vector<std::optional<double>>* per_bin) {
  const std::size_t bins = counts.positive.size();
  if (bins < 2) throw InsufficientDataError("alpha estimation needs N >= 1");
  const double n0 = static_cast<double>(counts.combined(0));
  std::vector<std::optional<double>> estimates(bins - 1);
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 1; k < bins; ++k) {
    const double nk = static_cast<double>(counts.combined(k));
    if (n0 <= 0.0 || nk <= 0.0) {
      diagnostics.warn("alpha: bin k=" + std::to_string(k) + " skipped (empty bin)");
      continue;
    }
    const double value = std::log(n0 / nk) / (static_cast<double>(k) * std::log(config.m));
    estimates[k - 1] = value;
    sum += value;
    ++used;
  }
  if (per_bin) *per_bin = estimates;
  if (used == 0) {
    throw InsufficientDataError("alpha estimation: no usable bin pair (first bin or all later bins empty)");
  }
  const double alpha = sum / static_cast<double>(used);
  if (alpha < kAlphaFloor || alpha > kAlphaCeiling) {
    std::ostringstream msg;
    msg << "alpha estimate " << alpha << " outside (0, 2); clamped";
    diagnostics.warn(msg.str());
    return std::clamp(alpha, kAlphaFloor, kAlphaCeiling);
  }
  return alpha;
}

double estimate_beta(const BinCounts& counts) {
  std::uint64_t plus = 0, minus = 0;
  for (std::size_t k = 0; k < counts.positive.size(); ++k) {
    plus += counts.positive[k];
    minus += counts.negative[k];
  }
  if (plus == 0 && minus == 0) throw InsufficientDataError("beta estimation: all bins are empty");
  if (plus == 0) return -1.0;
  if (minus == 0) return 1.0;
  const double rho = static_cast<double>(minus) / static_cast<double>(plus);
  return (1.0 - rho) / (1.0 + rho);
}

double estimate_sigma(const BinCounts& counts, double alpha_hat, const EstimationConfig& config,
                      Diagnostics& diagnostics, std::vector<std::optional<double>>* per_bin) {
  const double ka = k_alpha(alpha_hat);
  const double m = config.m;
  const double denom_common = ka * counts.h * static_cast<double>(counts.total) * (1.0 - std::pow(m, -alpha_hat));
  std::vector<std::optional<double>> estimates(counts.positive.size());
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < counts.positive.size(); ++k) {
    const double nk = static_cast<double>(counts.combined(k));
    if (nk <= 0.0) {
      diagnostics.warn("sigma: bin k=" + std::to_string(k) + " skipped (empty bin)");
      continue;
    }
    const double power = alpha_hat * std::pow(config.epsilon, alpha_hat) *
                         std::pow(m, static_cast<double>(k) * alpha_hat) * nk / denom_common;
    const double value = std::pow(power, 1.0 / alpha_hat);
    estimates[k] = value;
    sum += value;
    ++used;
  }
  if (per_bin) *per_bin = estimates;
  if (used == 0) throw InsufficientDataError("sigma estimation: all bins are empty");
  return sum / static_cast<double>(used);
}

LevyEstimate identify_levy(const DatasetPair& data, std::size_t component, const EstimationConfig& config,
                           Diagnostics& diagnostics) {
  const auto y = component_increments(data, component);
  LevyEstimate est;
  est.counts = bin_counts(y, config, data.h());
  est.alpha = estimate_alpha(est.counts, config, diagnostics, &est.alpha_per_bin);
  est.beta = estimate_beta(est.counts);
  est.sigma = estimate_sigma(est.counts, est.alpha, config, diagnostics, &est.sigma_per_bin);
  return est;
}

CubeFilterResult cube_filter(const DatasetPair& data, double half_width) {
  if (!(half_width > 0.0)) throw DomainError("cube half-width must be positive");
  const std::size_t n = data.dimension();
  std::vector<double> z, x;
  for (std::size_t r = 0; r < data.size(); ++r) {
    bool inside = true;
    for (std::size_t i = 0; i < n && inside; ++i) inside = std::abs(data.increment(r, i)) <= half_width;
    if (!inside) continue;
    const auto zr = data.z_row(r);
    const auto xr = data.x_row(r);
    z.insert(z.end(), zr.begin(), zr.end());
    x.insert(x.end(), xr.begin(), xr.end());
  }
  if (z.empty()) throw InsufficientDataError("no sample pair stays inside the cube");
  CubeFilterResult result;
  const std::size_t kept = z.size() / n;
  result.survival_fraction = static_cast<double>(kept) / static_cast<double>(data.size());
  result.data = DatasetPair(n, data.h(), std::move(z), std::move(x));
  return result;
}

std::size_t upper_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i - 1) / 2 + (j - i);
}

namespace {

struct Targets {
  bool drift = false;
  bool diffusion = false;
};

std::pair<RegressionResult, RegressionResult> regress(const DatasetPair& filtered, double fraction,
                                                      const BasisDictionary& dict,
                                                      std::span<const StableParams> levy,
                                                      const EstimationConfig& config,
                                                      Diagnostics& diagnostics, Targets wanted) {
  const std::size_t n = filtered.dimension();
  const std::size_t k = dict.size();
  if (dict.dimension() != n) throw ConfigError("dictionary dimension does not match the data");
  if (!levy.empty() && levy.size() != n) throw ConfigError("one Levy law per component is required");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw DomainError("survival fraction must lie in (0, 1]");
  const std::size_t rows = filtered.size();
  if (rows < k) {
    throw InsufficientDataError("insufficient rows: " + std::to_string(rows) + " retained pairs for " +
                                std::to_string(k) + " basis functions");
  }

  const double eps = config.cube_half_width();
  const std::size_t drift_count = wanted.drift ? n : 0;
  const std::size_t diff_count = wanted.diffusion ? n * (n + 1) / 2 : 0;
  const std::size_t rhs = drift_count + diff_count;

  std::vector<double> r_corr(n, 0.0), s_corr(n, 0.0);
  if (!levy.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      r_corr[i] = correction_r(levy[i], eps);
      s_corr[i] = correction_s(levy[i], eps, i, i);
    }
  }
  const double scale = fraction / filtered.h();

  const std::size_t chunks = chunk_count(rows);
  std::vector<LeastSquaresAccumulator> parts(chunks, LeastSquaresAccumulator(k, rhs));
  parallel_for_chunks(chunks, [&](std::size_t c) {
    const std::size_t begin = c * kRowChunk;
    const std::size_t end = std::min(rows, begin + kRowChunk);
    DenseMatrix a(end - begin, k);
    DenseMatrix b(end - begin, rhs);
    std::vector<double> dz(n);
    for (std::size_t r = begin; r < end; ++r) {
      const std::size_t local = r - begin;
      const auto point = filtered.z_row(r);
      auto arow = a.row(local);
      for (std::size_t f = 0; f < k; ++f) {
        try {
          arow[f] = dict[f].expression.evaluate(point);
        } catch (const DomainError& e) {
          throw DomainError("design matrix row " + std::to_string(r) + ", function '" + dict[f].name +
                            "': " + e.what());
        }
      }
      for (std::size_t i = 0; i < n; ++i) dz[i] = filtered.increment(r, i);
      auto br = b.row(local);
      for (std::size_t i = 0; i < drift_count; ++i) br[i] = scale * dz[i] - r_corr[i];
      if (diff_count > 0) {
        std::size_t col = drift_count;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i; j < n; ++j) {
            br[col++] = scale * dz[i] * dz[j] - (i == j ? s_corr[i] : 0.0);
          }
        }
      }
    }
    parts[c].add_block(a, b);
  });

  const auto solution = merge_pairwise(std::move(parts)).solve(config.condition_limit, &diagnostics);
  const double root_rows = std::sqrt(static_cast<double>(rows));

  auto extract = [&](std::size_t first, std::size_t count) {
    RegressionResult out;
    out.condition = solution.condition;
    out.method = solution.method;
    for (std::size_t t = first; t < first + count; ++t) {
      std::vector<double> coeffs(k);
      for (std::size_t f = 0; f < k; ++f) coeffs[f] = solution.coefficients(f, t);
      out.coefficients.push_back(std::move(coeffs));
      out.residual_rms.push_back(solution.residual_norms[t] / root_rows);
    }
    return out;
  };
  return {extract(0, drift_count), extract(drift_count, diff_count)};
}

}  // namespace

RegressionResult drift_regression(const DatasetPair& filtered, double fraction, const BasisDictionary& dict,
                                  std::span<const StableParams> levy, const EstimationConfig& config,
                                  Diagnostics& diagnostics) {
  return regress(filtered, fraction, dict, levy, config, diagnostics, {true, false}).first;
}

RegressionResult diffusion_regression(const DatasetPair& filtered, double fraction,
                                      const BasisDictionary& dict, std::span<const StableParams> levy,
                                      const EstimationConfig& config, Diagnostics& diagnostics) {
  return regress(filtered, fraction, dict, levy, config, diagnostics, {false, true}).second;
}

std::pair<RegressionResult, RegressionResult> drift_diffusion_regression(
    const DatasetPair& filtered, double fraction, const BasisDictionary& dict,
    std::span<const StableParams> levy, const EstimationConfig& config, Diagnostics& diagnostics) {
  return regress(filtered, fraction, dict, levy, config, diagnostics, {true, true});
}

CoefficientTable::CoefficientTable(BasisDictionary dictionary, std::vector<std::vector<double>> drift,
                                   std::vector<std::vector<double>> diffusion, double survival_fraction)
    : dictionary_(std::move(dictionary)),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      survival_fraction_(survival_fraction) {
  const std::size_t n = dictionary_.dimension();
  const std::size_t k = dictionary_.size();
  if (drift_.size() != n || diffusion_.size() != n * (n + 1) / 2) {
    throw DataError("coefficient table does not match the dictionary dimension");
  }
  for (const auto& row : drift_) {
    if (row.size() != k) throw DataError("drift coefficient vector has the wrong length");
  }
  for (const auto& row : diffusion_) {
    if (row.size() != k) throw DataError("diffusion coefficient vector has the wrong length");
  }
}

const std::vector<double>& CoefficientTable::diffusion(std::size_t i, std::size_t j) const {
  const std::size_t n = dimension();
  if (i >= n || j >= n) throw DomainError("diffusion index out of range");
  return diffusion_[upper_index(i, j, n)];
}

namespace {

double expand(const BasisDictionary& dict, const std::vector<double>& coeffs, std::span<const double> x) {
  std::vector<double> psi(dict.size());
  dict.evaluate(x, psi);
  double sum = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) sum += coeffs[k] * psi[k];
  return sum;
}

}  // namespace

double CoefficientTable::evaluate_drift(std::size_t i, std::span<const double> x) const {
  if (i >= dimension()) throw DomainError("drift index out of range");
  return expand(dictionary_, drift_[i], x);
}

double CoefficientTable::evaluate_diffusion(std::size_t i, std::size_t j, std::span<const double> x) const {
  return expand(dictionary_, diffusion(i, j), x);
}

DenseMatrix CoefficientTable::diffusion_matrix(std::span<const double> x) const {
  const std::size_t n = dimension();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      a(i, j) = evaluate_diffusion(i, j, x);
      a(j, i) = a(i, j);
    }
  }
  return a;
}

DenseMatrix factor_diffusion(const DenseMatrix& a, double tolerance) {
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be nonnegative");
  const auto eig = sym_eigen(a);
  const std::size_t n = a.rows();
  std::vector<double> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = eig.values[k];
    if (lambda < -tolerance) {
      std::ostringstream msg;
      msg << "diffusion matrix is not positive semidefinite (eigenvalue " << lambda << ")";
      throw DomainError(msg.str());
    }
    roots[k] = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
  }
  return eig.vectors * DenseMatrix::diagonal(roots);
}

IdentificationResult identify(const DatasetPair& data, const BasisDictionary& dict,
                              const EstimationConfig& config) {
  config.validate();
  const std::size_t n = data.dimension();
  if (dict.dimension() != n) throw ConfigError("dictionary dimension does not match the data");

  Diagnostics diagnostics;
  std::vector<LevyEstimate> levy;
  std::vector<StableParams> laws;
  for (std::size_t i = 0; i < n; ++i) {
    Diagnostics local;
    levy.push_back(identify_levy(data, i, config, local));
    for (const auto& w : local.warnings()) diagnostics.warn("component " + std::to_string(i + 1) + ": " + w);
    laws.push_back(levy.back().params());
  }

  auto filtered = cube_filter(data, config.cube_half_width());
  auto [drift, diffusion] = drift_diffusion_regression(filtered.data, filtered.survival_fraction, dict,
                                                       laws, config, diagnostics);

  CoefficientTable table(dict, drift.coefficients, diffusion.coefficients, filtered.survival_fraction);
  return IdentificationResult{std::move(levy),
                              filtered.survival_fraction,
                              filtered.data.size(),
                              std::move(drift),
                              std::move(diffusion),
                              std::move(table),
                              diagnostics.warnings()};
}

}  // namespace levysid
