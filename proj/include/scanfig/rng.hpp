#pragma once

// Counter-based random numbers.
//
// Every stochastic transform draws from the SplitMix64 output function
// evaluated at an explicit counter:
//
//   at(seed, n) = mix64(seed + (n + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer (Steele, Lea & Flood 2014). The
// value for element n never depends on evaluation order, so serial, threaded
// and SIMD code paths produce identical streams on every platform.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace scanfig {

struct RandomSeed {
  std::uint64_t value = 0;
  friend bool operator==(RandomSeed, RandomSeed) = default;
};

inline constexpr const char* kGeneratorName = "splitmix64-counter";

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child seed for a named sub-stream (per page, per transform).
constexpr RandomSeed derive_seed(RandomSeed parent, std::uint64_t key) noexcept {
  return RandomSeed{mix64(parent.value ^ mix64(key + 0x9E3779B97F4A7C15ULL))};
}

class CounterRng {
 public:
  constexpr explicit CounterRng(RandomSeed seed) noexcept : seed_(seed.value) {}

  constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01(std::uint64_t counter) const noexcept {
    return static_cast<double>(at(counter) >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller on counters 2n and 2n+1.
  double normal(std::uint64_t n) const noexcept {
    const double u1 = (static_cast<double>(at(2 * n) >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform01(2 * n + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
};

// Sequential view over a CounterRng, for algorithms that consume a variable
// number of draws (shuffles).
class SplitMix64 {
 public:
  explicit SplitMix64(RandomSeed seed) noexcept : rng_(seed) {}

  std::uint64_t next() noexcept { return rng_.at(counter_++); }
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % bound;
  }

 private:
  CounterRng rng_;
  std::uint64_t counter_ = 0;
};

}  // namespace scanfig
