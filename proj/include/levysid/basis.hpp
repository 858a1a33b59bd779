#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "levysid/expression.hpp"
#include "levysid/numeric.hpp"

namespace levysid {

struct BasisFunction {
  std::string name;
  Expression expression;
};

/// Ordered dictionary Ψ = [ψ_1 … ψ_K] of functions of x1..xn.
class BasisDictionary {
 public:
  /// Throws ConfigError on an empty list, dimension mismatch or duplicate names.
  BasisDictionary(std::size_t dimension, std::vector<BasisFunction> functions, std::string spec);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return functions_.size(); }
  const BasisFunction& operator[](std::size_t k) const { return functions_[k]; }
  const std::vector<BasisFunction>& functions() const noexcept { return functions_; }

  /// How the dictionary was requested: "poly:<d>", "example2" or "custom".
  const std::string& spec() const noexcept { return spec_; }

  /// ψ_k(point) for every k into `out` (size K).
  void evaluate(std::span<const double> point, std::span<double> out) const;

 private:
  std::size_t dimension_;
  std::vector<BasisFunction> functions_;
  std::string spec_;
};

inline constexpr std::size_t kMaxDictionarySize = 10'000;

/// All monomials of total degree ≤ `degree`, ordered by degree and then by
/// descending exponent vector: for n = 3, d = 2 that is
/// 1, x1, x2, x3, x1^2, x1*x2, x1*x3, x2^2, x2*x3, x3^2.
BasisDictionary polynomial_dictionary(std::size_t dimension, std::size_t degree);

/// The fixed 19-function one-dimensional dictionary used for the gene
/// regulation example (polynomials, trigonometric terms, tanh kinks and
/// Gaussian bumps).
BasisDictionary example2_dictionary();

/// Resolves "poly:<d>" or "example2" for the given dimension.
BasisDictionary dictionary_from_spec(const std::string& spec, std::size_t dimension);

/// Custom dictionary from expression strings; names are the strings as given.
BasisDictionary dictionary_from_expressions(const std::vector<std::string>& expressions,
                                            std::size_t dimension);

/// M×K matrix with entry (j, k) = ψ_k(point_j). `points` is row-major M×n.
/// Evaluation failures are reported with their (row, function) location.
DenseMatrix design_matrix(const BasisDictionary& dict, std::span<const double> points);

}  // namespace levysid
