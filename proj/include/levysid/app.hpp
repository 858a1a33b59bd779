#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "levysid/config.hpp"
#include "levysid/dataset_io.hpp"
#include "levysid/errors.hpp"
#include "levysid/report.hpp"

namespace levysid {

/// 0 ok, 2 config, 3 data, 4 insufficient data, 5 numeric, 1 anything else.
int exit_code(ErrorCategory category);

/// Simulates the configured model over its grid and writes the dataset.
DatasetPair cmd_simulate(const ModelConfig& model, const std::string& out_path, std::uint64_t seed,
                         DatasetFormat format, std::ostream& log);

struct EstimateOptions {
  std::optional<std::uint64_t> seed;    // recorded only
  std::optional<nlohmann::json> model;  // model config echo
  bool timings = false;
};

/// Lévy laws, cube filter, drift and diffusion regression; writes the report.
RunReport cmd_estimate(const std::string& dataset_path, const EstimationSettings& settings,
                       const std::string& report_path, const EstimateOptions& options, std::ostream& log);

/// "drift:<i>" or "diffusion:<i>,<j>" with 1-based indices.
struct ComponentSpec {
  bool drift = true;
  std::size_t i = 0;  // 0-based
  std::size_t j = 0;
};
ComponentSpec parse_component(const std::string& text, std::size_t dimension);

/// "start:stop:step", both ends inclusive when stop lies on the grid.
std::vector<double> parse_range(const std::string& text);

struct PlotOptions {
  std::size_t axis = 0;     // 0-based coordinate that varies
  std::vector<double> at;   // base point for the other coordinates (zeros if empty)
};

/// Writes "x,learned[,true]" rows along the range.
void cmd_plot_data(const RunReport& report, const std::optional<ModelConfig>& model,
                   const ComponentSpec& component, const std::vector<double>& xs, const PlotOptions& options,
                   const std::string& out_path);

struct PipelineOutputs {
  std::string dataset;
  std::string report;
  std::vector<std::string> plots;
};

/// simulate → estimate → plot-data into `workdir`.
PipelineOutputs cmd_pipeline(const ModelConfig& model, const EstimationSettings& settings,
                             const std::string& workdir, std::uint64_t seed, DatasetFormat format,
                             bool timings, std::ostream& log);

/// Parses the command line and runs one subcommand. Errors are reported on
/// `err` as "error[<category>]: <message>" and mapped through exit_code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levysid
