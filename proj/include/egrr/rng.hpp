#pragma once

#include <cstdint>
#include <random>

#include "egrr/core.hpp"

namespace egrr {

/// Deterministic uniform stream. std::mt19937_64 has a fully specified
/// output sequence; the real-valued conversions below are done by hand
/// because std::uniform_real_distribution is implementation-defined.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [0, 2*pi).
  double angle() { return 2.0 * kPi * uniform(); }

private:
  std::mt19937_64 engine_;
};

inline RngStream rng_stream(std::uint64_t seed) { return RngStream(seed); }

/// Seed of replicate `k` in a batch started from `base_seed`.
constexpr std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t k) noexcept {
  return base_seed + k;
}

}  // namespace egrr
