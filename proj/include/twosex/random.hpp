#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace twosex {

/// Identifier of the stream-derivation scheme, recorded in every report.
inline constexpr std::string_view kRngScheme = "splitmix64(seed,index)->mt19937_64";

/// A seeded pseudo-random stream. mt19937_64 output is fixed by the standard,
/// and the conversions below use only integer arithmetic, so draws are
/// reproducible across platforms and standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream for worker/replicate `index` under `master_seed`.
  static RandomStream derive(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace twosex
