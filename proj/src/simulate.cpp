#include "levysid/simulate.hpp"

#include <cmath>
#include <string>

#include "levysid/errors.hpp"
#include "levysid/parallel.hpp"

namespace levysid {

std::vector<double> generate_grid(std::span<const std::pair<double, double>> bounds,
                                  std::span<const std::size_t> mesh, std::size_t cap) {
  const std::size_t n = bounds.size();
  if (n == 0 || mesh.size() != n) throw ConfigError("grid: bounds and mesh must have equal, nonzero length");
  std::size_t total = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(bounds[k].first < bounds[k].second)) {
      throw ConfigError("grid: lower bound must be below upper bound on axis " + std::to_string(k + 1));
    }
    if (mesh[k] == 0) throw ConfigError("grid: mesh must be positive on axis " + std::to_string(k + 1));
    if (total > cap / mesh[k]) {
      throw ConfigError("grid: mesh product exceeds the cap of " + std::to_string(cap) + " points");
    }
    total *= mesh[k];
  }

  auto axis_value = [&](std::size_t k, std::size_t index) {
    if (mesh[k] == 1) return bounds[k].first;
    if (index + 1 == mesh[k]) return bounds[k].second;
    const double step = (bounds[k].second - bounds[k].first) / static_cast<double>(mesh[k] - 1);
    return bounds[k].first + step * static_cast<double>(index);
  };

  std::vector<double> points(total * n);
  std::vector<std::size_t> index(n, 0);
  for (std::size_t row = 0; row < total; ++row) {
    for (std::size_t k = 0; k < n; ++k) points[row * n + k] = axis_value(k, index[k]);
    for (std::size_t k = n; k-- > 0;) {
      if (++index[k] < mesh[k]) break;
      index[k] = 0;
    }
  }
  return points;
}

namespace {

// Scratch-buffer variant used by the row loop.
void euler_step_into(const SdeModel& model, std::span<const double> z, double h,
                     RandomStream& stream, std::span<double> lambda, std::span<double> normals,
                     std::span<double> out) {
  const std::size_t n = model.dimension;
  model.eval_drift(z, out);
  for (std::size_t i = 0; i < n; ++i) out[i] = z[i] + out[i] * h;

  if (model.has_gaussian()) {
    model.eval_gaussian(z, lambda);
    const double root_h = std::sqrt(h);
    for (std::size_t k = 0; k < n; ++k) normals[k] = stream.normal();
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) sum += lambda[i * n + k] * normals[k];
      out[i] += root_h * sum;
    }
  }
  if (model.has_levy()) {
    for (std::size_t i = 0; i < n; ++i) {
      const StableParams& p = model.levy[i];
      const double scale = std::pow(h, 1.0 / p.alpha());
      out[i] += p.sigma() * draw_stable(p.shape(), scale, stream);
    }
  }
}

}  // namespace

std::vector<double> euler_pair_step(const SdeModel& model, std::span<const double> z, double h,
                                    RandomStream& stream) {
  if (!(h > 0.0)) throw DomainError("time step h must be positive");
  const std::size_t n = model.dimension;
  if (z.size() != n) throw DomainError("initial point dimension mismatch");
  std::vector<double> lambda(n * n), normals(n), out(n);
  euler_step_into(model, z, h, stream, lambda, normals, out);
  return out;
}

DatasetPair simulate_pairs(const SdeModel& model, std::vector<double> z, double h,
                           std::uint64_t seed) {
  model.validate();
  const std::size_t n = model.dimension;
  if (!(h > 0.0)) throw ConfigError("time step h must be positive");
  if (z.empty() || z.size() % n != 0) throw DataError("initial points must form a nonempty M x n block");
  const std::size_t rows = z.size() / n;
  std::vector<double> x(z.size());

  parallel_for_chunks(chunk_count(rows), [&](std::size_t chunk) {
    std::vector<double> lambda(n * n), normals(n);
    const std::size_t begin = chunk * kRowChunk;
    const std::size_t end = std::min(rows, begin + kRowChunk);
    for (std::size_t row = begin; row < end; ++row) {
      RandomStream stream(seed, row);
      std::span<const double> zr(z.data() + row * n, n);
      std::span<double> xr(x.data() + row * n, n);
      try {
        euler_step_into(model, zr, h, stream, lambda, normals, xr);
      } catch (const DomainError& e) {
        throw DomainError("row " + std::to_string(row) + ": " + e.what());
      }
    }
  });
  return DatasetPair(n, h, std::move(z), std::move(x));
}

}  // namespace levysid
