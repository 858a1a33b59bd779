#include "levysid/app.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "levysid/simulate.hpp"

namespace levysid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t parse_index(const std::string& text, std::size_t dimension, const std::string& whole) {
  std::size_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || value == 0 || value > dimension) {
    throw ConfigError("component '" + whole + "': index '" + text + "' must be in 1.." + std::to_string(dimension));
  }
  return value - 1;
}

double parse_real(const std::string& text, const std::string& what) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ConfigError(what + ": '" + text + "' is not a number");
  }
  return value;
}

}  // namespace

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig: return 2;
    case ErrorCategory::kData: return 3;
    case ErrorCategory::kInsufficientData: return 4;
    case ErrorCategory::kNumeric: return 5;
    case ErrorCategory::kIo:
    case ErrorCategory::kOther: return 1;
  }
  return 1;
}

DatasetPair cmd_simulate(const ModelConfig& model, const std::string& out_path, std::uint64_t seed,
                         DatasetFormat format, std::ostream& log) {
  const auto start = Clock::now();
  DatasetPair data = simulate_pairs(model.model, model.grid.points(), model.h, seed);
  const double elapsed = seconds_since(start);
  write_dataset(data, out_path, format);
  log << "M=" << data.size() << " n=" << data.dimension() << " h=" << format_double(data.h())
      << " rate=" << static_cast<long long>(data.size() / std::max(elapsed, 1e-9)) << " rows/s\n";
  return data;
}

RunReport cmd_estimate(const std::string& dataset_path, const EstimationSettings& settings,
                       const std::string& report_path, const EstimateOptions& options, std::ostream& log) {
  auto start = Clock::now();
  const DatasetPair data = read_dataset(dataset_path);
  const double read_time = seconds_since(start);
  const BasisDictionary dict = settings.build_dictionary(data.dimension());

  start = Clock::now();
  const IdentificationResult result = identify(data, dict, settings.config);
  const double estimate_time = seconds_since(start);

  RunReport report = make_report(result, data.size(), data.h());
  report.config = {{"estimation", estimation_config_to_json(settings)}};
  if (options.model) report.config["model"] = *options.model;
  report.seed = options.seed;
  if (options.timings) report.timings = nlohmann::json{{"read", read_time}, {"estimate", estimate_time}};
  write_report(report, report_path);

  for (std::size_t i = 0; i < report.levy.size(); ++i) {
    const auto& l = report.levy[i];
    log << "component " << i + 1 << ": alpha=" << format_double(l.alpha) << " beta=" << format_double(l.beta)
        << " sigma=" << format_double(l.sigma) << "\n";
  }
  log << "survival fraction " << format_double(report.survival_fraction) << " (" << report.retained_rows << " of "
      << report.rows << " rows)\n";
  return report;
}

ComponentSpec parse_component(const std::string& text, std::size_t dimension) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("component '" + text + "': expected drift:<i> or diffusion:<i>,<j>");
  }
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  ComponentSpec spec;
  if (kind == "drift") {
    spec.drift = true;
    spec.i = spec.j = parse_index(rest, dimension, text);
  } else if (kind == "diffusion") {
    spec.drift = false;
    const auto comma = rest.find(',');
    if (comma == std::string::npos) throw ConfigError("component '" + text + "': expected diffusion:<i>,<j>");
    spec.i = parse_index(rest.substr(0, comma), dimension, text);
    spec.j = parse_index(rest.substr(comma + 1), dimension, text);
  } else {
    throw ConfigError("unknown component kind '" + kind + "' (expected drift or diffusion)");
  }
  return spec;
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError("range '" + text + "': expected start:stop:step");
  const double start = parse_real(parts[0], "range start");
  const double stop = parse_real(parts[1], "range stop");
  const double step = parse_real(parts[2], "range step");
  if (!(step > 0.0)) throw ConfigError("range '" + text + "': step must be positive");
  if (stop < start) throw ConfigError("range '" + text + "': stop lies below start");
  const double q = (stop - start) / step;
  const double nearest = std::round(q);
  const double intervals = std::abs(q - nearest) <= 1e-9 * std::max(1.0, q) ? nearest : std::floor(q);
  if (intervals > 1e8) throw ConfigError("range '" + text + "': too many points");
  std::vector<double> xs(static_cast<std::size_t>(intervals) + 1);
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = start + static_cast<double>(k) * step;
  return xs;
}

void cmd_plot_data(const RunReport& report, const std::optional<ModelConfig>& model,
                   const ComponentSpec& component, const std::vector<double>& xs, const PlotOptions& options,
                   const std::string& out_path) {
  const CoefficientTable table = report_table(report);
  const std::size_t n = table.dimension();
  if (component.i >= n || component.j >= n) throw ConfigError("component index out of range for the report");
  if (options.axis >= n) throw ConfigError("axis out of range for dimension " + std::to_string(n));
  if (!options.at.empty() && options.at.size() != n) {
    throw ConfigError("--at needs " + std::to_string(n) + " coordinates");
  }
  if (model && model->model.dimension != n) throw ConfigError("model dimension does not match the report");

  std::vector<double> point = options.at.empty() ? std::vector<double>(n, 0.0) : options.at;
  std::string buffer = model ? "x,learned,true\n" : "x,learned\n";
  std::vector<double> truth(n);
  for (double x : xs) {
    point[options.axis] = x;
    double learned = 0.0;
    double exact = 0.0;
    if (component.drift) {
      learned = table.evaluate_drift(component.i, point);
      if (model) {
        model->model.eval_drift(point, truth);
        exact = truth[component.i];
      }
    } else {
      learned = table.evaluate_diffusion(component.i, component.j, point);
      if (model) exact = model->model.diffusion_matrix(point)[component.i * n + component.j];
    }
    buffer += format_double(x) + "," + format_double(learned);
    if (model) buffer += "," + format_double(exact);
    buffer += "\n";
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + out_path + "' for writing");
  out << buffer;
  out.close();
  if (!out) throw IoError("error writing '" + out_path + "'");
}

PipelineOutputs cmd_pipeline(const ModelConfig& model, const EstimationSettings& settings,
                             const std::string& workdir, std::uint64_t seed, DatasetFormat format,
                             bool timings, std::ostream& log) {
  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);
  if (ec) throw IoError("cannot create workdir '" + workdir + "': " + ec.message());
  const std::filesystem::path dir(workdir);

  PipelineOutputs outputs;
  outputs.dataset = (dir / (format == DatasetFormat::kBinary ? "dataset.bin" : "dataset.csv")).string();
  outputs.report = (dir / "report.json").string();

  cmd_simulate(model, outputs.dataset, seed, format, log);
  EstimateOptions options;
  options.seed = seed;
  options.model = model_config_to_json(model);
  options.timings = timings;
  const RunReport report = cmd_estimate(outputs.dataset, settings, outputs.report, options, log);

  // Curves along the first axis across the grid, other coordinates at the
  // grid centre.
  const std::size_t n = model.model.dimension;
  PlotOptions plot;
  for (const auto& [lo, hi] : model.grid.bounds) plot.at.push_back(0.5 * (lo + hi));
  const auto [lo, hi] = model.grid.bounds[0];
  constexpr std::size_t kPlotIntervals = 500;
  std::vector<double> xs(kPlotIntervals + 1);
  for (std::size_t k = 0; k <= kPlotIntervals; ++k) {
    xs[k] = k == kPlotIntervals ? hi : lo + (hi - lo) * static_cast<double>(k) / kPlotIntervals;
  }
  const std::optional<ModelConfig> truth(model);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string path = (dir / ("plot_drift_" + std::to_string(i + 1) + ".csv")).string();
    cmd_plot_data(report, truth, {true, i, i}, xs, plot, path);
    outputs.plots.push_back(path);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const std::string path =
          (dir / ("plot_diffusion_" + std::to_string(i + 1) + std::to_string(j + 1) + ".csv")).string();
      cmd_plot_data(report, truth, {false, i, j}, xs, plot, path);
      outputs.plots.push_back(path);
    }
  }
  log << "wrote " << outputs.dataset << ", " << outputs.report << " and " << outputs.plots.size()
      << " plot files\n";
  return outputs;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identify drift, diffusion and alpha-stable jump laws of SDEs from sample pairs", "levy-sid"};
  app.require_subcommand(1);

  std::string config, est_config, out_path, report_path, workdir, component, range, dataset;
  std::string format = "csv";
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> estimate_seed;
  std::size_t axis = 1;
  std::vector<double> at;
  bool timings = false;

  auto* simulate = app.add_subcommand("simulate", "simulate sample pairs over the model grid");
  simulate->add_option("--config", config, "model config file or built-in name")->required();
  simulate->add_option("--out", out_path, "dataset output path")->required();
  simulate->add_option("--seed", seed, "random seed")->capture_default_str();
  simulate->add_option("--format", format, "dataset format")->check(CLI::IsMember({"csv", "bin"}))->capture_default_str();

  auto* estimate = app.add_subcommand("estimate", "identify the jump laws, drift and diffusion");
  estimate->add_option("dataset,--data", dataset, "dataset file (csv or bin)")->required();
  estimate->add_option("--est-config", est_config, "estimation config file (defaults if omitted)");
  estimate->add_option("--report", report_path, "report output path")->required();
  estimate->add_option("--seed", estimate_seed, "seed to record in the report");
  estimate->add_option("--config", config, "model config to echo into the report");
  estimate->add_flag("--timings", timings, "record wall-clock timings in the report");

  auto* plot = app.add_subcommand("plot-data", "tabulate a learned coefficient");
  plot->add_option("--report", report_path, "report file")->required();
  plot->add_option("--config", config, "model config for the true-value column");
  plot->add_option("--component", component, "drift:<i> or diffusion:<i>,<j>")->required();
  plot->add_option("--range", range, "start:stop:step")->required();
  plot->add_option("--axis", axis, "1-based coordinate that varies")->capture_default_str();
  plot->add_option("--at", at, "base point for the other coordinates")->delimiter(',');
  plot->add_option("--out", out_path, "CSV output path")->required();

  auto* pipeline = app.add_subcommand("pipeline", "simulate, estimate and tabulate in one go");
  pipeline->add_option("--config", config, "model config file or built-in name")->required();
  pipeline->add_option("--est-config", est_config, "estimation config file (defaults if omitted)");
  pipeline->add_option("--workdir", workdir, "output directory")->required();
  pipeline->add_option("--seed", seed, "random seed")->capture_default_str();
  pipeline->add_option("--format", format, "dataset format")->check(CLI::IsMember({"csv", "bin"}))->capture_default_str();
  pipeline->add_flag("--timings", timings, "record wall-clock timings in the report");

  std::vector<const char*> argv;
  argv.push_back("levy-sid");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : exit_code(ErrorCategory::kConfig);
  }

  try {
    auto settings = [&] { return est_config.empty() ? EstimationSettings{} : load_estimation_config(est_config); };
    if (*simulate) {
      cmd_simulate(load_model_config(config), out_path, seed, parse_dataset_format(format), out);
    } else if (*estimate) {
      EstimateOptions options;
      options.seed = estimate_seed;
      options.timings = timings;
      if (!config.empty()) options.model = model_config_to_json(load_model_config(config));
      const RunReport report = cmd_estimate(dataset, settings(), report_path, options, out);
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
    } else if (*plot) {
      const RunReport report = read_report(report_path);
      std::optional<ModelConfig> model;
      if (!config.empty()) model = load_model_config(config);
      if (axis == 0 || axis > report.dimension) {
        throw ConfigError("--axis must be in 1.." + std::to_string(report.dimension));
      }
      PlotOptions options{axis - 1, at};
      cmd_plot_data(report, model, parse_component(component, report.dimension), parse_range(range), options,
                    out_path);
    } else if (*pipeline) {
      cmd_pipeline(load_model_config(config), settings(), workdir, seed, parse_dataset_format(format), timings,
                   out);
    }
  } catch (const Error& e) {
    err << "error[" << category_name(e.category()) << "]: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const std::bad_alloc&) {
    err << "error[other]: out of memory\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error[other]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace levysid
