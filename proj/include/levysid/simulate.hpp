#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "levysid/dataset.hpp"
#include "levysid/model.hpp"
#include "levysid/random.hpp"

namespace levysid {

inline constexpr std::size_t kDefaultGridCap = 100'000'000;

/// Tensor-product grid over `bounds`, `mesh[k]` equally spaced values per
/// axis with both endpoints included (a single-point axis sits on its lower
/// bound). Rows are ordered lexicographically in the axis indices, last
/// axis fastest. Returned row-major, M×n.
std::vector<double> generate_grid(std::span<const std::pair<double, double>> bounds,
                                  std::span<const std::size_t> mesh,
                                  std::size_t cap = kDefaultGridCap);

/// One Euler step x = z + b(z)h + Λ(z)√h g + σΔL.
/// Draw order per step: n normals, then one stable variate per component.
std::vector<double> euler_pair_step(const SdeModel& model, std::span<const double> z, double h,
                                    RandomStream& stream);

/// Applies euler_pair_step to every row of `z` (row-major M×n). Row r draws
/// from RandomStream(seed, r), so the output depends only on the seed.
DatasetPair simulate_pairs(const SdeModel& model, std::vector<double> z, double h,
                           std::uint64_t seed);

}  // namespace levysid
