#pragma once

#include <cstdint>
#include <string_view>

namespace rpr {

/// Counter-based generator: output i of stream (seed, stream) is
///   mix64(key + (i + 1) * 0x9E3779B97F4A7C15),
///   key = mix64(mix64(seed) ^ (stream * 0xD1B54A32D192ED03 + 0x8CB92BA72F3D8DD7))
/// where mix64 is the SplitMix64 finalizer. The sequence depends only on
/// (seed, stream, i), which makes parallel replications reproducible.
class CounterRng {
public:
  static constexpr std::string_view kName = "splitmix64-counter";

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next() noexcept;

  /// Uniform integer in [0, bound), bound > 0 (Lemire's method with rejection).
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Uniform double in the open interval (0, 1).
  double uniform_open() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z) noexcept;

} // namespace rpr
