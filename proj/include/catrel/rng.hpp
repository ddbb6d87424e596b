#pragma once

// SplitMix64 (Steele, Lea, Flood 2014). Every stream in the library is derived
// from a base seed by hashing (seed, tag...) through the same finalizer, so
// trial i of a Monte Carlo run can be generated without touching trials 0..i-1.

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace catrel {

constexpr std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a base seed with any number of integer tags into an independent seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = splitmix_finalize(base + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t t : tags) h = splitmix_finalize(h ^ (t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  return h;
}

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix_finalize(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n); rejection sampling keeps the result
  /// identical across standard libraries.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::uint64_t state_;
};

}  // namespace catrel
