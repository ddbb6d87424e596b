#pragma once

// Seed streams shared by the selection algorithms. Each evaluation site mixes
// its own tag into the user seed so no two sites reuse a stream.

#include <cstdint>

#include "catrel/estimator.hpp"
#include "catrel/rng.hpp"

namespace catrel::detail {

enum SeedTag : std::uint64_t {
  kGreedyTag = 1,
  kIndividualTag = 2,
  kAchievedTag = 3,
  kInclusionTag = 4,
  kTreeTag = 5,
};

inline SamplerConfig with_seed(const SamplerConfig& cfg, std::uint64_t seed) {
  SamplerConfig out = cfg;
  out.seed = seed;
  return out;
}

/// Seed for evaluating pair `pair` after a greedy step that picked `last` as
/// its `step`-th item.
inline SamplerConfig inclusion_cfg(const SamplerConfig& cfg, std::size_t step, std::size_t last, std::size_t pair) {
  return with_seed(cfg, derive_seed(cfg.seed, {kInclusionTag, step, last, pair}));
}

inline SamplerConfig achieved_cfg(const SamplerConfig& cfg, std::size_t pair) {
  return with_seed(cfg, derive_seed(cfg.seed, {kAchievedTag, pair}));
}

}  // namespace catrel::detail
