#pragma once

// Seeded random streams whose output is identical on every platform.
// std::mt19937_64 has a fully specified sequence, but the standard
// distributions do not, so the conversions below are done by hand.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace acceptance {

/// SplitMix64 finalizer; a good 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Small counter-based generator. Stream k of seed s is independent of the
/// order in which streams are consumed, which is what per-sample Monte Carlo
/// draws need.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : state_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return UINT64_MAX; }

  result_type operator()() noexcept { return mix64(state_ += 0x9e3779b97f4a7c15ULL); }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) built from the top 53 bits.
template <class Engine>
double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

template <class Engine>
double uniform(Engine& engine, double lo, double hi) {
  return lo + (hi - lo) * uniform01(engine);
}

/// Uniform integer in [0, n) by rejection, n > 0.
template <class Engine>
std::uint64_t uniform_index(Engine& engine, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = engine();
  } while (r >= limit);
  return r % n;
}

/// Standard normal via Box-Muller (one value per call, two uniforms).
template <class Engine>
double standard_normal(Engine& engine) {
  const double u1 = 1.0 - uniform01(engine);  // (0, 1]
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

using Engine64 = std::mt19937_64;

}  // namespace acceptance
