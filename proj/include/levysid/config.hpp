#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "levysid/basis.hpp"
#include "levysid/estimate.hpp"
#include "levysid/model.hpp"

namespace levysid {

struct GridSpec {
  std::vector<std::pair<double, double>> bounds;
  std::vector<std::size_t> mesh;

  std::vector<double> points() const;
};

/// A model configuration document after built-in expansion and validation.
struct ModelConfig {
  SdeModel model;
  GridSpec grid;
  double h = 1e-3;
};

inline constexpr double kDefaultStepSize = 1e-3;

/// Names accepted in `name` that expand to a complete model with its grid.
std::vector<std::string> builtin_model_names();

/// Parses {name | dimension, drift[], gaussian[][], levy[], grid{bounds, mesh}, h}.
/// With a built-in name, any other field given overrides the built-in value
/// (`levy: []` or `gaussian: []` switch that noise off). Errors are
/// ConfigError with the offending field path, e.g. "$.drift[1]: ...".
ModelConfig parse_model_config(const nlohmann::json& doc);

/// Reads a JSON file, or expands `source` directly when it is a built-in
/// name and no file of that name exists.
ModelConfig load_model_config(const std::string& source);

/// Fully expanded form (canonical expressions), stable under re-parsing.
nlohmann::json model_config_to_json(const ModelConfig& config);

struct EstimationSettings {
  EstimationConfig config;
  std::string dictionary = "poly:2";        // "poly:<d>", "example2" or "custom"
  std::vector<std::string> custom_functions;  // used when dictionary == "custom"

  BasisDictionary build_dictionary(std::size_t dimension) const;
};

/// Parses {epsilon, m, N, cube_epsilon?, dictionary, condition_limit?,
/// psd_tolerance?}; `dictionary` is a spec string or a list of expressions.
EstimationSettings parse_estimation_config(const nlohmann::json& doc);
EstimationSettings load_estimation_config(const std::string& path);
nlohmann::json estimation_config_to_json(const EstimationSettings& settings);

/// Reads and parses a JSON file; IoError if unreadable, ConfigError if not JSON.
nlohmann::json read_json_file(const std::string& path);

}  // namespace levysid
