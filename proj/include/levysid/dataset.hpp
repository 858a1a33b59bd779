#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace levysid {

/// Initial points Z and their images X after one time step h, both stored
/// row-major M×n.
class DatasetPair {
 public:
  DatasetPair() = default;
  /// Validates shapes, h > 0, M ≥ 1 and finiteness; throws DataError.
  DatasetPair(std::size_t dimension, double h, std::vector<double> z, std::vector<double> x);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return dimension_ == 0 ? 0 : z_.size() / dimension_; }
  double h() const noexcept { return h_; }

  std::span<const double> z_row(std::size_t row) const {
    return {z_.data() + row * dimension_, dimension_};
  }
  std::span<const double> x_row(std::size_t row) const {
    return {x_.data() + row * dimension_, dimension_};
  }
  double z(std::size_t row, std::size_t i) const { return z_[row * dimension_ + i]; }
  double x(std::size_t row, std::size_t i) const { return x_[row * dimension_ + i]; }
  double increment(std::size_t row, std::size_t i) const {
    return x_[row * dimension_ + i] - z_[row * dimension_ + i];
  }

  const std::vector<double>& z_data() const noexcept { return z_; }
  const std::vector<double>& x_data() const noexcept { return x_; }

  friend bool operator==(const DatasetPair&, const DatasetPair&) = default;

 private:
  std::size_t dimension_ = 0;
  double h_ = 0.0;
  std::vector<double> z_;
  std::vector<double> x_;
};

}  // namespace levysid
