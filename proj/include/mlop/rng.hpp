#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

namespace mlop {

/// SplitMix64 finalizer. Used both as the stream generator and as the
/// key-mixing hash for keyed streams.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Purpose tags that separate the independent random streams of a run.
enum class Stream : std::uint64_t {
  graph = 0x67726170,
  matching = 0x6d617463,
  rate = 0x72617465,
  init = 0x696e6974,
  estimate = 0x65737469,
};

/// Small seedable generator (SplitMix64). Satisfies
/// UniformRandomBitGenerator; all samplers in this project draw through the
/// helpers below so outputs do not depend on the standard library's
/// distribution implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr Rng(std::uint64_t seed) noexcept : state_(seed) {}

  /// Stream determined only by the seed and the key tuple, so draws do not
  /// depend on the order in which other streams were consumed.
  static constexpr Rng keyed(std::uint64_t seed, Stream purpose,
                             std::initializer_list<std::uint64_t> key) noexcept {
    std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ static_cast<std::uint64_t>(purpose));
    for (std::uint64_t k : key) h = mix64(h ^ (k + 0x9e3779b97f4a7c15ULL));
    return Rng(h);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, bound); bound > 0. Rejection sampling, unbiased.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  double cauchy(double loc, double scale) noexcept {
    // u in (0,1) keeps tan away from its poles.
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return loc + scale * std::tan(std::numbers::pi * (u - 0.5));
  }

 private:
  std::uint64_t state_;
};

}  // namespace mlop
