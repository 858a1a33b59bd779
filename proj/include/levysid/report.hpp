#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levysid/estimate.hpp"

namespace levysid {

struct LevyReport {
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 0.0;
  std::vector<std::uint64_t> positive;  // n_k⁺, k = 0..N
  std::vector<std::uint64_t> negative;  // n_k⁻
  std::vector<std::optional<double>> alpha_per_bin;
  std::vector<std::optional<double>> sigma_per_bin;

  friend bool operator==(const LevyReport&, const LevyReport&) = default;
};

struct CoefficientReport {
  std::string label;  // "b1", "a12", ...
  std::vector<double> coefficients;
  double residual_rms = 0.0;

  friend bool operator==(const CoefficientReport&, const CoefficientReport&) = default;
};

struct RegressionReport {
  double condition = 0.0;
  std::string method;
  std::vector<CoefficientReport> components;

  friend bool operator==(const RegressionReport&, const RegressionReport&) = default;
};

/// Everything one estimation run produced, in serialisable form.
struct RunReport {
  nlohmann::json config;  // {"estimation": ..., "model": ... (pipeline only)}
  std::optional<std::uint64_t> seed;
  std::size_t dimension = 0;
  std::size_t rows = 0;
  double h = 0.0;
  std::vector<LevyReport> levy;
  double survival_fraction = 0.0;
  std::size_t retained_rows = 0;
  std::string dictionary;              // spec: "poly:<d>", "example2", "custom"
  std::vector<std::string> functions;  // basis names in order
  RegressionReport drift;
  RegressionReport diffusion;  // upper triangle, i ≤ j
  std::vector<std::string> warnings;
  std::optional<nlohmann::json> timings;  // seconds per stage; omitted unless requested

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline constexpr const char* kReportFormat = "levy-sid-report v1";

RunReport make_report(const IdentificationResult& result, std::size_t rows, double h);

nlohmann::json report_to_json(const RunReport& report);
/// Throws DataError naming the offending field.
RunReport report_from_json(const nlohmann::json& doc);

/// Pretty-printed JSON with a trailing newline; floats in shortest
/// round-trip form.
std::string serialize_report(const RunReport& report);
RunReport parse_report(const std::string& text);

void write_report(const RunReport& report, const std::string& path);
RunReport read_report(const std::string& path);

/// Rebuilds the learned expansions from a report.
CoefficientTable report_table(const RunReport& report);

}  // namespace levysid
