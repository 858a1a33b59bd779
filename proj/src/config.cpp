#include "levysid/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "levysid/errors.hpp"
#include "levysid/simulate.hpp"

namespace levysid {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void reject_unknown_keys(const json& doc, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) fail(path + "." + key, "unknown field");
  }
}

double number_at(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::size_t count_at(const json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0) fail(path, "expected a nonnegative integer");
  return value.get<std::size_t>();
}

Expression expression_at(const json& value, std::size_t dimension, const std::string& path) {
  std::string text;
  if (value.is_string()) {
    text = value.get<std::string>();
  } else if (value.is_number()) {
    text = json(number_at(value, path)).dump();
  } else {
    fail(path, "expected an expression string");
  }
  try {
    return Expression::parse(text, dimension);
  } catch (const SyntaxError& e) {
    fail(path, e.what());
  }
}

SdeModel builtin_model(const std::string& name) {
  if (name == "lorenz3d") return lorenz3d_model();
  if (name == "genereg1d") return genereg1d_model();
  throw ConfigError("unknown built-in model");
}

GridSpec builtin_grid(const std::string& name) {
  if (name == "lorenz3d") return {{{-2.0, 2.0}, {-2.0, 2.0}, {-2.0, 2.0}}, {400, 400, 400}};
  return {{{0.0, 5.0}}, {10'000'000}};
}

GridSpec parse_grid(const json& doc, std::size_t n, const GridSpec* base) {
  const std::string path = "$.grid";
  if (!doc.is_object()) fail(path, "expected an object");
  reject_unknown_keys(doc, path, {"bounds", "mesh"});
  GridSpec grid;
  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    if (!b.is_array() || b.size() != n) fail(path + ".bounds", "expected " + std::to_string(n) + " [lo, hi] pairs");
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = path + ".bounds[" + std::to_string(i) + "]";
      if (!b[i].is_array() || b[i].size() != 2) fail(p, "expected [lo, hi]");
      const double lo = number_at(b[i][0], p + "[0]");
      const double hi = number_at(b[i][1], p + "[1]");
      if (!(lo <= hi)) fail(p, "lower bound exceeds upper bound");
      grid.bounds.emplace_back(lo, hi);
    }
  } else if (base) {
    grid.bounds = base->bounds;
  } else {
    fail(path + ".bounds", "missing");
  }
  if (doc.contains("mesh")) {
    const json& m = doc["mesh"];
    if (m.is_array()) {
      if (m.size() != n) fail(path + ".mesh", "expected " + std::to_string(n) + " entries");
      for (std::size_t i = 0; i < n; ++i) grid.mesh.push_back(count_at(m[i], path + ".mesh[" + std::to_string(i) + "]"));
    } else {
      grid.mesh.assign(n, count_at(m, path + ".mesh"));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (grid.mesh[i] == 0) fail(path + ".mesh", "every axis needs at least one point");
    }
  } else if (base) {
    grid.mesh = base->mesh;
  } else {
    fail(path + ".mesh", "missing");
  }
  return grid;
}

}  // namespace

std::vector<double> GridSpec::points() const { return generate_grid(bounds, mesh); }

std::vector<std::string> builtin_model_names() { return {"lorenz3d", "genereg1d"}; }

ModelConfig parse_model_config(const json& doc) {
  if (!doc.is_object()) fail("$", "model configuration must be a JSON object");
  reject_unknown_keys(doc, "$", {"name", "dimension", "drift", "gaussian", "levy", "grid", "h"});

  ModelConfig config;
  bool builtin = false;
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("$.name", "expected a string");
    name = doc["name"].get<std::string>();
    for (const auto& b : builtin_model_names()) builtin = builtin || b == name;
  }
  if (builtin) {
    config.model = builtin_model(name);
    config.grid = builtin_grid(name);
  } else if (!doc.contains("dimension")) {
    if (doc.contains("name")) fail("$.name", "unknown built-in model '" + name + "' and no dimension given");
    fail("$", "either a built-in name or a dimension is required");
  }
  config.model.name = name.empty() ? "custom" : name;

  std::size_t n = config.model.dimension;
  if (doc.contains("dimension")) {
    const std::size_t d = count_at(doc["dimension"], "$.dimension");
    if (d == 0) fail("$.dimension", "must be at least 1");
    if (builtin && d != n) fail("$.dimension", "does not match built-in model '" + name + "'");
    n = d;
  }
  config.model.dimension = n;

  if (doc.contains("drift")) {
    const json& d = doc["drift"];
    if (!d.is_array() || d.size() != n) fail("$.drift", "expected " + std::to_string(n) + " expressions");
    config.model.drift.clear();
    for (std::size_t i = 0; i < n; ++i) {
      config.model.drift.push_back(expression_at(d[i], n, "$.drift[" + std::to_string(i) + "]"));
    }
  } else if (!builtin) {
    fail("$.drift", "missing");
  }

  if (doc.contains("gaussian")) {
    const json& g = doc["gaussian"];
    config.model.gaussian.clear();
    if (!g.is_null() && !(g.is_array() && g.empty())) {
      if (!g.is_array() || g.size() != n) fail("$.gaussian", "expected an " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
      for (std::size_t i = 0; i < n; ++i) {
        const std::string p = "$.gaussian[" + std::to_string(i) + "]";
        if (!g[i].is_array() || g[i].size() != n) fail(p, "expected " + std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j) {
          config.model.gaussian.push_back(expression_at(g[i][j], n, p + "[" + std::to_string(j) + "]"));
        }
      }
    }
  }

  if (doc.contains("levy")) {
    const json& l = doc["levy"];
    config.model.levy.clear();
    if (!l.is_null() && !(l.is_array() && l.empty())) {
      if (!l.is_array() || l.size() != n) fail("$.levy", "expected " + std::to_string(n) + " {alpha, beta, sigma} entries");
      for (std::size_t i = 0; i < n; ++i) {
        const std::string p = "$.levy[" + std::to_string(i) + "]";
        if (!l[i].is_object()) fail(p, "expected an object");
        reject_unknown_keys(l[i], p, {"alpha", "beta", "sigma"});
        for (const char* key : {"alpha", "beta", "sigma"}) {
          if (!l[i].contains(key)) fail(p + "." + key, "missing");
        }
        try {
          config.model.levy.emplace_back(number_at(l[i]["alpha"], p + ".alpha"), number_at(l[i]["beta"], p + ".beta"),
                                         number_at(l[i]["sigma"], p + ".sigma"));
        } catch (const DomainError& e) {
          fail(p, e.what());
        }
      }
    }
  }

  if (doc.contains("grid")) {
    config.grid = parse_grid(doc["grid"], n, builtin ? &config.grid : nullptr);
  } else if (!builtin) {
    fail("$.grid", "missing");
  }

  config.h = kDefaultStepSize;
  if (doc.contains("h")) {
    config.h = number_at(doc["h"], "$.h");
    if (!(config.h > 0.0)) fail("$.h", "must be positive");
  }

  try {
    config.model.validate();
  } catch (const ConfigError& e) {
    fail("$", e.what());
  }
  return config;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": invalid JSON (" + e.what() + ")");
  }
}

ModelConfig load_model_config(const std::string& source) {
  if (!std::filesystem::exists(source)) {
    for (const auto& name : builtin_model_names()) {
      if (name == source) return parse_model_config(json{{"name", name}});
    }
  }
  return parse_model_config(read_json_file(source));
}

json model_config_to_json(const ModelConfig& config) {
  const SdeModel& model = config.model;
  const std::size_t n = model.dimension;
  json doc;
  doc["name"] = model.name;
  doc["dimension"] = n;
  json drift = json::array();
  for (const auto& e : model.drift) drift.push_back(e.to_string());
  doc["drift"] = drift;
  json gaussian = json::array();
  if (!model.gaussian.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < n; ++j) row.push_back(model.gaussian[i * n + j].to_string());
      gaussian.push_back(row);
    }
  }
  doc["gaussian"] = gaussian;
  json levy = json::array();
  for (const auto& p : model.levy) levy.push_back({{"alpha", p.alpha()}, {"beta", p.beta()}, {"sigma", p.sigma()}});
  doc["levy"] = levy;
  json bounds = json::array();
  for (const auto& [lo, hi] : config.grid.bounds) bounds.push_back({lo, hi});
  doc["grid"] = {{"bounds", bounds}, {"mesh", config.grid.mesh}};
  doc["h"] = config.h;
  return doc;
}

BasisDictionary EstimationSettings::build_dictionary(std::size_t dimension) const {
  if (dictionary == "custom") return dictionary_from_expressions(custom_functions, dimension);
  return dictionary_from_spec(dictionary, dimension);
}

EstimationSettings parse_estimation_config(const json& doc) {
  if (!doc.is_object()) fail("$", "estimation configuration must be a JSON object");
  reject_unknown_keys(doc, "$", {"epsilon", "m", "N", "cube_epsilon", "dictionary", "condition_limit", "psd_tolerance"});
  EstimationSettings settings;
  EstimationConfig& c = settings.config;
  if (doc.contains("epsilon")) c.epsilon = number_at(doc["epsilon"], "$.epsilon");
  if (doc.contains("m")) c.m = number_at(doc["m"], "$.m");
  if (doc.contains("N")) c.bins = count_at(doc["N"], "$.N");
  if (doc.contains("cube_epsilon") && !doc["cube_epsilon"].is_null()) {
    c.cube_epsilon = number_at(doc["cube_epsilon"], "$.cube_epsilon");
  }
  if (doc.contains("condition_limit")) c.condition_limit = number_at(doc["condition_limit"], "$.condition_limit");
  if (doc.contains("psd_tolerance")) c.psd_tolerance = number_at(doc["psd_tolerance"], "$.psd_tolerance");
  if (doc.contains("dictionary")) {
    const json& d = doc["dictionary"];
    if (d.is_string()) {
      settings.dictionary = d.get<std::string>();
      if (settings.dictionary == "custom") fail("$.dictionary", "a custom dictionary is given as a list of expressions");
    } else if (d.is_array()) {
      settings.dictionary = "custom";
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (!d[k].is_string()) fail("$.dictionary[" + std::to_string(k) + "]", "expected an expression string");
        settings.custom_functions.push_back(d[k].get<std::string>());
      }
      if (settings.custom_functions.empty()) fail("$.dictionary", "must not be empty");
    } else {
      fail("$.dictionary", "expected a spec string or a list of expressions");
    }
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    fail("$", e.what());
  }
  if (settings.dictionary != "custom" && settings.dictionary != "example2" &&
      settings.dictionary.rfind("poly:", 0) != 0) {
    fail("$.dictionary", "unknown dictionary '" + settings.dictionary + "'");
  }
  return settings;
}

EstimationSettings load_estimation_config(const std::string& path) {
  return parse_estimation_config(read_json_file(path));
}

json estimation_config_to_json(const EstimationSettings& settings) {
  const EstimationConfig& c = settings.config;
  json doc;
  doc["epsilon"] = c.epsilon;
  doc["m"] = c.m;
  doc["N"] = c.bins;
  doc["cube_epsilon"] = c.cube_epsilon ? json(*c.cube_epsilon) : json(nullptr);
  if (settings.dictionary == "custom") {
    doc["dictionary"] = settings.custom_functions;
  } else {
    doc["dictionary"] = settings.dictionary;
  }
  doc["condition_limit"] = c.condition_limit;
  doc["psd_tolerance"] = c.psd_tolerance;
  return doc;
}

}  // namespace levysid
