#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ppim::protocols {

/// Seeded generator behind all protocol randomness.
///
/// Version 1: std::mt19937_64 seeded with the 64-bit seed; bounded draws use
/// rejection sampling on raw 64-bit outputs, so sequences do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  static constexpr std::string_view kVersion = "mt19937_64-reject-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;  // largest multiple of bound
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform in [-bound, bound].
  std::int64_t centered(std::uint64_t bound) {
    return static_cast<std::int64_t>(uniform(2 * bound + 1)) - static_cast<std::int64_t>(bound);
  }

  /// Child generator for an independent sub-stream.
  Rng fork() { return Rng(next()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ppim::protocols
