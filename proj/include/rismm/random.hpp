#pragma once

// Counter-based random streams. Every Monte Carlo work unit owns a stream
// derived from (seed, purpose, index), so draws do not depend on thread
// scheduling and serial and sharded runs see identical numbers.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "rismm/errors.hpp"

namespace rismm {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Philox4x32-10 block function (Salmon et al., Random123).
inline constexpr std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                           std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53U;
  constexpr std::uint32_t kM1 = 0xCD9E8D57U;
  constexpr std::uint32_t kW0 = 0x9E3779B9U;
  constexpr std::uint32_t kW1 = 0xBB67AE85U;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

/// Purpose tags keep streams of different estimators disjoint under one seed.
enum class StreamTag : std::uint32_t {
  kGeneric = 0,
  kLink = 1,
  kReflection = 2,
  kEta = 3,
  kFading = 4,
  kCoverage = 5,
  kSumRate = 6,
  kScene = 7,
  kConditional = 8,
};

/// A random stream: UniformRandomBitGenerator over 64-bit words plus the
/// handful of variates the simulators need. Copyable; copies replay.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, StreamTag tag, std::uint64_t index)
      : RandomStream(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag) + 0x5EEDULL)), index) {}

  RandomStream(std::uint64_t key, std::uint64_t index) {
    key_ = {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
    ctr_ = {0U, 0U, static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 2) refill();
    const std::size_t i = 2 * pos_++;
    return (std::uint64_t{block_[i + 1]} << 32) | block_[i];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double exponential(double mean) { return -mean * std::log(uniform_open0()); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson variate. Below a mean of 500 this is CDF inversion from a single
  /// uniform, so for a fixed stream the count is nondecreasing in the mean
  /// (paired runs over a density grid nest their point sets). PTRS
  /// (Hoermann 1993) above.
  std::uint64_t poisson(double mean) {
    detail::require(mean >= 0.0 && std::isfinite(mean), "Poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 500.0) {
      const double u = uniform();
      double p = std::exp(-mean);
      double cdf = p;
      std::uint64_t k = 0;
      const double k_cap = mean + 40.0 * std::sqrt(mean) + 100.0;
      while (cdf <= u && static_cast<double>(k) < k_cap) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
      }
      return k;
    }
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::abs(u);
      const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
          -mean + k * loglam - std::lgamma(k + 1.0)) {
        return static_cast<std::uint64_t>(k);
      }
    }
  }

  double angle() { return 2.0 * std::numbers::pi * uniform(); }

 private:
  void refill() {
    block_ = philox4x32_10(ctr_, key_);
    if (++ctr_[0] == 0U) ++ctr_[1];
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> block_{};
  std::size_t pos_ = 2;
};

}  // namespace rismm
