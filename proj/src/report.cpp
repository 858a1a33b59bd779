#include "levysid/report.hpp"

#include <fstream>
#include <iterator>

#include "levysid/errors.hpp"

namespace levysid {

using nlohmann::json;

namespace {

std::string diffusion_label(std::size_t i, std::size_t j) {
  return "a" + std::to_string(i + 1) + std::to_string(j + 1);
}

json optional_array(const std::vector<std::optional<double>>& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(v ? json(*v) : json(nullptr));
  return out;
}

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw DataError("report " + path + ": " + what);
}

const json& field(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.is_object() || !doc.contains(key)) bad(path + "." + key, "missing");
  return doc.at(key);
}

double number(const json& doc, const std::string& key, const std::string& path) {
  const json& v = field(doc, key, path);
  if (!v.is_number()) bad(path + "." + key, "expected a number");
  return v.get<double>();
}

std::size_t count(const json& doc, const std::string& key, const std::string& path) {
  const json& v = field(doc, key, path);
  if (!v.is_number_unsigned()) bad(path + "." + key, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::string text(const json& doc, const std::string& key, const std::string& path) {
  const json& v = field(doc, key, path);
  if (!v.is_string()) bad(path + "." + key, "expected a string");
  return v.get<std::string>();
}

const json& array(const json& doc, const std::string& key, const std::string& path) {
  const json& v = field(doc, key, path);
  if (!v.is_array()) bad(path + "." + key, "expected an array");
  return v;
}

std::vector<double> numbers(const json& doc, const std::string& key, const std::string& path) {
  std::vector<double> out;
  for (const auto& v : array(doc, key, path)) {
    if (!v.is_number()) bad(path + "." + key, "expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::optional<double>> optional_numbers(const json& doc, const std::string& key,
                                                    const std::string& path) {
  std::vector<std::optional<double>> out;
  for (const auto& v : array(doc, key, path)) {
    if (v.is_null()) {
      out.emplace_back();
    } else if (v.is_number()) {
      out.emplace_back(v.get<double>());
    } else {
      bad(path + "." + key, "expected numbers or null");
    }
  }
  return out;
}

std::vector<std::uint64_t> counts(const json& doc, const std::string& key, const std::string& path) {
  std::vector<std::uint64_t> out;
  for (const auto& v : array(doc, key, path)) {
    if (!v.is_number_unsigned()) bad(path + "." + key, "expected counts");
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

json regression_to_json(const RegressionReport& r) {
  json components = json::array();
  for (const auto& c : r.components) {
    components.push_back({{"label", c.label}, {"coefficients", c.coefficients}, {"residual_rms", c.residual_rms}});
  }
  return {{"condition", r.condition}, {"method", r.method}, {"components", components}};
}

RegressionReport regression_from_json(const json& doc, const std::string& path) {
  RegressionReport r;
  r.condition = number(doc, "condition", path);
  r.method = text(doc, "method", path);
  const json& components = array(doc, "components", path);
  for (std::size_t k = 0; k < components.size(); ++k) {
    const std::string p = path + ".components[" + std::to_string(k) + "]";
    CoefficientReport c;
    c.label = text(components[k], "label", p);
    c.coefficients = numbers(components[k], "coefficients", p);
    c.residual_rms = number(components[k], "residual_rms", p);
    r.components.push_back(std::move(c));
  }
  return r;
}

RegressionReport regression_report(const RegressionResult& result, const std::vector<std::string>& labels) {
  RegressionReport r;
  r.condition = result.condition;
  r.method = std::string(solve_method_name(result.method));
  for (std::size_t t = 0; t < result.coefficients.size(); ++t) {
    r.components.push_back({labels[t], result.coefficients[t], result.residual_rms[t]});
  }
  return r;
}

}  // namespace

RunReport make_report(const IdentificationResult& result, std::size_t rows, double h) {
  const CoefficientTable& table = result.table;
  const std::size_t n = table.dimension();
  RunReport report;
  report.dimension = n;
  report.rows = rows;
  report.h = h;
  for (const auto& est : result.levy) {
    report.levy.push_back({est.alpha, est.beta, est.sigma, est.counts.positive, est.counts.negative,
                           est.alpha_per_bin, est.sigma_per_bin});
  }
  report.survival_fraction = result.survival_fraction;
  report.retained_rows = result.retained_rows;
  report.dictionary = table.dictionary().spec();
  for (const auto& f : table.dictionary().functions()) report.functions.push_back(f.name);

  std::vector<std::string> drift_labels, diffusion_labels;
  for (std::size_t i = 0; i < n; ++i) {
    drift_labels.push_back("b" + std::to_string(i + 1));
    for (std::size_t j = i; j < n; ++j) diffusion_labels.push_back(diffusion_label(i, j));
  }
  report.drift = regression_report(result.drift, drift_labels);
  report.diffusion = regression_report(result.diffusion, diffusion_labels);
  report.warnings = result.warnings;
  return report;
}

json report_to_json(const RunReport& report) {
  json doc;
  doc["format"] = kReportFormat;
  doc["config"] = report.config;
  doc["seed"] = report.seed ? json(*report.seed) : json(nullptr);
  doc["data"] = {{"dimension", report.dimension}, {"rows", report.rows}, {"h", report.h}};
  json levy = json::array();
  for (const auto& l : report.levy) {
    levy.push_back({{"alpha", l.alpha},
                    {"beta", l.beta},
                    {"sigma", l.sigma},
                    {"bins", {{"positive", l.positive}, {"negative", l.negative}}},
                    {"alpha_per_bin", optional_array(l.alpha_per_bin)},
                    {"sigma_per_bin", optional_array(l.sigma_per_bin)}});
  }
  doc["levy"] = levy;
  doc["survival_fraction"] = report.survival_fraction;
  doc["retained_rows"] = report.retained_rows;
  doc["dictionary"] = {{"spec", report.dictionary}, {"functions", report.functions}};
  doc["drift"] = regression_to_json(report.drift);
  doc["diffusion"] = regression_to_json(report.diffusion);
  doc["warnings"] = report.warnings;
  if (report.timings) doc["timings"] = *report.timings;
  return doc;
}

RunReport report_from_json(const json& doc) {
  if (!doc.is_object()) bad("$", "expected an object");
  if (text(doc, "format", "$") != kReportFormat) bad("$.format", "unsupported report format");
  RunReport report;
  report.config = field(doc, "config", "$");
  const json& seed = field(doc, "seed", "$");
  if (seed.is_number_unsigned()) {
    report.seed = seed.get<std::uint64_t>();
  } else if (!seed.is_null()) {
    bad("$.seed", "expected an unsigned integer or null");
  }
  const json& data = field(doc, "data", "$");
  report.dimension = count(data, "dimension", "$.data");
  report.rows = count(data, "rows", "$.data");
  report.h = number(data, "h", "$.data");
  const json& levy = array(doc, "levy", "$");
  for (std::size_t i = 0; i < levy.size(); ++i) {
    const std::string p = "$.levy[" + std::to_string(i) + "]";
    LevyReport l;
    l.alpha = number(levy[i], "alpha", p);
    l.beta = number(levy[i], "beta", p);
    l.sigma = number(levy[i], "sigma", p);
    const json& bins = field(levy[i], "bins", p);
    l.positive = counts(bins, "positive", p + ".bins");
    l.negative = counts(bins, "negative", p + ".bins");
    l.alpha_per_bin = optional_numbers(levy[i], "alpha_per_bin", p);
    l.sigma_per_bin = optional_numbers(levy[i], "sigma_per_bin", p);
    report.levy.push_back(std::move(l));
  }
  report.survival_fraction = number(doc, "survival_fraction", "$");
  report.retained_rows = count(doc, "retained_rows", "$");
  const json& dict = field(doc, "dictionary", "$");
  report.dictionary = text(dict, "spec", "$.dictionary");
  for (const auto& f : array(dict, "functions", "$.dictionary")) {
    if (!f.is_string()) bad("$.dictionary.functions", "expected strings");
    report.functions.push_back(f.get<std::string>());
  }
  report.drift = regression_from_json(field(doc, "drift", "$"), "$.drift");
  report.diffusion = regression_from_json(field(doc, "diffusion", "$"), "$.diffusion");
  for (const auto& w : array(doc, "warnings", "$")) {
    if (!w.is_string()) bad("$.warnings", "expected strings");
    report.warnings.push_back(w.get<std::string>());
  }
  if (doc.contains("timings")) report.timings = doc["timings"];
  return report;
}

std::string serialize_report(const RunReport& report) { return report_to_json(report).dump(2) + "\n"; }

RunReport parse_report(const std::string& contents) {
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("report is not valid JSON (") + e.what() + ")");
  }
  return report_from_json(doc);
}

void write_report(const RunReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << serialize_report(report);
  out.close();
  if (!out) throw IoError("error writing '" + path + "'");
}

RunReport read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  const std::string contents((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_report(contents);
}

CoefficientTable report_table(const RunReport& report) {
  const std::size_t n = report.dimension;
  BasisDictionary dict = [&] {
    try {
      if (report.dictionary == "custom") return dictionary_from_expressions(report.functions, n);
      return dictionary_from_spec(report.dictionary, n);
    } catch (const ConfigError& e) {
      throw DataError(std::string("report dictionary: ") + e.what());
    }
  }();
  if (dict.size() != report.functions.size()) bad("$.dictionary", "function count does not match the spec");
  for (std::size_t k = 0; k < dict.size(); ++k) {
    if (dict[k].name != report.functions[k]) bad("$.dictionary.functions", "names do not match the spec");
  }
  std::vector<std::vector<double>> drift, diffusion;
  for (const auto& c : report.drift.components) drift.push_back(c.coefficients);
  for (const auto& c : report.diffusion.components) diffusion.push_back(c.coefficients);
  return CoefficientTable(std::move(dict), std::move(drift), std::move(diffusion), report.survival_fraction);
}

}  // namespace levysid
