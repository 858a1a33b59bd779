#pragma once

#include <array>
#include <cstdint>

namespace levysid {

/// Philox4x32-10 block function (Salmon et al., counter-based RNG).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Value-typed random stream identified by (seed, stream id).
///
/// Each stream walks its own counter space, so stream k of seed s yields the
/// same numbers regardless of which thread draws it or how many other
/// streams exist. Variates are produced with portable transforms (no
/// <random> distributions), making sequences identical across standard
/// library implementations.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Derives an independent stream of the same seed.
  RandomStream substream(std::uint64_t stream_id) const { return {seed_, stream_id}; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform();
  /// Standard normal (Box-Muller, one cached spare).
  double normal();
  /// Unit-rate exponential.
  double exponential();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  unsigned buffered_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levysid
