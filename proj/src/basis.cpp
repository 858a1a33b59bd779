#include "levysid/basis.hpp"

#include <charconv>
#include <set>

#include "levysid/errors.hpp"
#include "levysid/parallel.hpp"

namespace levysid {

BasisDictionary::BasisDictionary(std::size_t dimension, std::vector<BasisFunction> functions,
                                 std::string spec)
    : dimension_(dimension), functions_(std::move(functions)), spec_(std::move(spec)) {
  if (functions_.empty()) throw ConfigError("dictionary must contain at least one function");
  std::set<std::string> names;
  for (const auto& fn : functions_) {
    if (fn.expression.dimension() != dimension_) {
      throw ConfigError("dictionary function '" + fn.name + "' has the wrong dimension");
    }
    if (!names.insert(fn.name).second) {
      throw ConfigError("duplicate dictionary function name '" + fn.name + "'");
    }
  }
}

void BasisDictionary::evaluate(std::span<const double> point, std::span<double> out) const {
  for (std::size_t k = 0; k < functions_.size(); ++k) out[k] = functions_[k].expression.evaluate(point);
}

namespace {

std::string monomial_name(const std::vector<std::size_t>& exponents) {
  std::string name;
  for (std::size_t v = 0; v < exponents.size(); ++v) {
    if (exponents[v] == 0) continue;
    if (!name.empty()) name += "*";
    name += "x" + std::to_string(v + 1);
    if (exponents[v] > 1) name += "^" + std::to_string(exponents[v]);
  }
  return name.empty() ? "1" : name;
}

// Exponent vectors of total degree `degree` in descending lexicographic order.
void exponents_of_degree(std::size_t var, std::size_t remaining, std::vector<std::size_t>& current,
                         std::vector<std::vector<std::size_t>>& out) {
  if (var + 1 == current.size()) {
    current[var] = remaining;
    out.push_back(current);
    return;
  }
  for (std::size_t e = remaining + 1; e-- > 0;) {
    current[var] = e;
    exponents_of_degree(var + 1, remaining - e, current, out);
  }
  current[var] = 0;
}

}  // namespace

BasisDictionary polynomial_dictionary(std::size_t dimension, std::size_t degree) {
  if (dimension == 0) throw ConfigError("polynomial dictionary needs dimension >= 1");
  // K = C(n+d, d), guarded against the cap before enumerating.
  std::size_t count = 1;
  for (std::size_t i = 1; i <= degree; ++i) {
    count = count * (dimension + i) / i;
    if (count > kMaxDictionarySize) {
      throw ConfigError("polynomial dictionary exceeds " + std::to_string(kMaxDictionarySize) + " functions");
    }
  }
  std::vector<BasisFunction> functions;
  functions.reserve(count);
  for (std::size_t d = 0; d <= degree; ++d) {
    std::vector<std::vector<std::size_t>> exps;
    std::vector<std::size_t> current(dimension, 0);
    exponents_of_degree(0, d, current, exps);
    for (const auto& e : exps) {
      const std::string name = monomial_name(e);
      functions.push_back({name, Expression::parse(name, dimension)});
    }
  }
  return BasisDictionary(dimension, std::move(functions), "poly:" + std::to_string(degree));
}

BasisDictionary example2_dictionary() {
  static const char* const kFunctions[] = {
      "1",
      "x1",
      "x1^2",
      "x1^3",
      "sin(x1)",
      "cos(11*x1)",
      "sin(11*x1)",
      "-10*tanh(10*x1)^2 + 10",
      "-10*tanh(10*x1 - 10)^2 + 10",
      "exp(-50*x1^2)",
      "exp(-50*(x1 - 3)^2)",
      "exp(-0.3*x1^2)",
      "exp(-0.3*(x1 - 3)^2)",
      "exp(-2*(x1 - 2)^2)",
      "exp(-50*(x1 - 4)^2)",
      "exp(-0.6*(x1 - 4)^2)",
      "exp(-0.6*(x1 - 3)^2)",
      "-2*tanh(2*x1 - 4)^2 + 2",
      "tanh(x1 - 4)^2 + 1",
  };
  std::vector<BasisFunction> functions;
  for (const char* text : kFunctions) functions.push_back({text, Expression::parse(text, 1)});
  return BasisDictionary(1, std::move(functions), "example2");
}

BasisDictionary dictionary_from_spec(const std::string& spec, std::size_t dimension) {
  if (spec == "example2") {
    if (dimension != 1) throw ConfigError("dictionary 'example2' is one-dimensional");
    return example2_dictionary();
  }
  constexpr std::string_view kPoly = "poly:";
  if (spec.starts_with(kPoly)) {
    std::size_t degree = 0;
    const char* first = spec.data() + kPoly.size();
    const char* last = spec.data() + spec.size();
    auto [ptr, ec] = std::from_chars(first, last, degree);
    if (ec == std::errc{} && ptr == last && first != last) return polynomial_dictionary(dimension, degree);
  }
  throw ConfigError("unknown dictionary '" + spec + "' (expected poly:<degree> or example2)");
}

BasisDictionary dictionary_from_expressions(const std::vector<std::string>& expressions,
                                            std::size_t dimension) {
  std::vector<BasisFunction> functions;
  for (const auto& text : expressions) functions.push_back({text, Expression::parse(text, dimension)});
  return BasisDictionary(dimension, std::move(functions), "custom");
}

DenseMatrix design_matrix(const BasisDictionary& dict, std::span<const double> points) {
  const std::size_t n = dict.dimension();
  if (points.size() % n != 0) throw DomainError("point block does not match the dictionary dimension");
  const std::size_t rows = points.size() / n;
  const std::size_t k = dict.size();
  DenseMatrix a(rows, k);
  parallel_for_chunks(chunk_count(rows), [&](std::size_t chunk) {
    const std::size_t begin = chunk * kRowChunk;
    const std::size_t end = std::min(rows, begin + kRowChunk);
    for (std::size_t r = begin; r < end; ++r) {
      const auto point = points.subspan(r * n, n);
      for (std::size_t f = 0; f < k; ++f) {
        try {
          a(r, f) = dict[f].expression.evaluate(point);
        } catch (const DomainError& e) {
          throw DomainError("design matrix row " + std::to_string(r) + ", function '" + dict[f].name +
                            "': " + e.what());
        }
      }
    }
  });
  return a;
}

}  // namespace levysid
