#include "levysid/dataset.hpp"

#include <cmath>
#include <string>

#include "levysid/errors.hpp"

namespace levysid {

DatasetPair::DatasetPair(std::size_t dimension, double h, std::vector<double> z,
                         std::vector<double> x)
    : dimension_(dimension), h_(h), z_(std::move(z)), x_(std::move(x)) {
  if (dimension_ == 0) throw DataError("dataset dimension must be at least 1");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw DataError("time step h must be positive");
  if (z_.size() != x_.size()) throw DataError("Z and X differ in shape");
  if (z_.empty() || z_.size() % dimension_ != 0) {
    throw DataError("dataset must hold a positive whole number of rows");
  }
  for (std::size_t k = 0; k < z_.size(); ++k) {
    if (!std::isfinite(z_[k]) || !std::isfinite(x_[k])) {
      throw DataError("non-finite entry in row " + std::to_string(k / dimension_));
    }
  }
}

}  // namespace levysid
