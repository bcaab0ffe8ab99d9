#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace simplex {

/// Seedable random source with a fixed generator (mt19937_64) and fixed
/// variate mappings, so identical seeds reproduce identical streams.
/// One instance per logical stream of work; never shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  /// Unit-rate exponential.
  double exponential() { return -std::log1p(-uniform01()); }

  /// Unbiased integer in [0, n) by rejection.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t span = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = (~std::uint64_t{0} / span) * span;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % span);
  }

  /// Fixed-splitting sub-seed derivation: adding streams never perturbs
  /// existing ones.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    auto mix = [](std::uint64_t x) {
      x += 0x9e3779b97f4a7c15ULL;
      x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
      x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
      return x ^ (x >> 31);
    };
    return mix(mix(seed) ^ mix(stream + 0x2545f4914f6cdd1dULL));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace simplex
