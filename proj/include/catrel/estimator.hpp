#pragma once

// Monte Carlo reliability with lazy edge instantiation: each trial runs a BFS
// from the source set and flips an edge's coin only when the BFS reaches it.
// Trial i draws from SplitMix64 seeded with derive_seed(seed, {i}), so the
// estimate is the same whether trials run serially or on several workers.

#include <cstdint>
#include <span>

#include "catrel/graph.hpp"

namespace catrel {

struct SamplerConfig {
  std::size_t samples = 1000;  // K
  std::uint64_t seed = 0x5eedULL;
  unsigned parallelism = 1;
};

struct ReliabilityEstimate {
  double value = 0.0;
  std::size_t samples = 0;
  std::size_t successes = 0;
  std::uint64_t seed = 0;

  /// sqrt(ln(2/delta) / (2K)): Hoeffding radius at confidence 1 - delta.
  double hoeffding_halfwidth(double delta) const;
};

/// Fraction of trials in which t is reached from any of `sources` along
/// directed edges. t in sources gives 1.
ReliabilityEstimate mc_reliability(const UncertainGraph& graph, std::span<const NodeId> sources, NodeId t,
                                   const CatalystSet& cats, const SamplerConfig& cfg);

/// Fraction of trials in which every node of q is reached, ignoring edge
/// direction, from the smallest id in q. Requires |q| >= 2 distinct nodes.
ReliabilityEstimate mc_connectivity(const UncertainGraph& graph, std::span<const NodeId> q, const CatalystSet& cats,
                                    const SamplerConfig& cfg);

/// ceil(ln(2/delta) / (2 epsilon^2)); epsilon and delta in (0, 1).
std::size_t required_samples(double epsilon, double delta);

}  // namespace catrel
