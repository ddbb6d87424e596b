#pragma once

// Top-r minimum Steiner trees on the undirected view of a single-catalyst
// multigraph. Each minimum is found by Dreyfus-Wagner dynamic programming over
// terminal subsets; the ranked list comes from Lawler partitioning on
// forced-in / forced-out multigraph edges.

#include <span>
#include <vector>

#include "catrel/paths.hpp"

namespace catrel {

inline constexpr std::size_t kMaxSteinerTerminals = 8;

struct SteinerTree {
  std::vector<EdgeChoice> choices;  // sorted by (edge, catalyst)
  double weight = 0.0;              // sum of -log probabilities
  CatalystSet catalysts;
};

/// Up to r distinct trees spanning q, in non-decreasing weight order, every
/// leaf a member of q. Ties within 1e-12 are ordered by their choice lists.
/// Requires 2 <= |q| <= 8 (GuardError above).
std::vector<SteinerTree> top_r_steiner_trees(const Multigraph& multigraph, std::span<const NodeId> q, std::size_t r);

InducedSubgraph induced_subgraph(const UncertainGraph& graph, std::span<const SteinerTree> trees);

}  // namespace catrel
