#pragma once

// Multi-source/target catalyst selection under MAX, AVG and MIN aggregates,
// the minimum catalyst cover that seeds MIN, and k-terminal connectivity.

#include <span>
#include <vector>

#include "catrel/selection.hpp"

namespace catrel {

enum class Aggregate { Max, Avg, Min };

struct AggregateQuery {
  std::vector<NodeId> sources;
  std::vector<NodeId> targets;
  std::size_t k = 0;
  std::size_t r = 1;
  Aggregate aggregate = Aggregate::Max;
};

struct ConnectivityQuery {
  std::vector<NodeId> peers;
  std::size_t k = 0;
  std::size_t r = 1;
};

struct NodePair {
  NodeId source;
  NodeId target;
};

/// Sorted, deduplicated S x T, sources major.
std::vector<NodePair> query_pairs(std::span<const NodeId> sources, std::span<const NodeId> targets);

/// MAX aggregate. Nodes in both S and T are dropped first; PreconditionError
/// if that empties either side. pair_values/trace hold each pair's achieved
/// value over the reduced S x T.
SelectionResult topk_max(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg);

/// AVG aggregate over all of S x T; pairs with s == t count as reliability 1.
SelectionResult topk_avg(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg);

SelectionResult topk_min(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg);

SelectionResult run_aggregate(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg);

struct CatalystCover {
  CatalystSet catalysts;
  std::vector<CatalystId> order;  // selection order of the surviving catalysts
  std::vector<bool> connected;    // per pair; false when the pair has no usable path
  bool over_budget = false;       // still larger than k after the removal pass
};

/// Greedy cover: each round connects one more pair with the path adding the
/// fewest new catalysts (ties: more reliable path, then lower pair index).
/// Over budget, catalysts are tried for removal in reverse selection order
/// and dropped when every connected pair keeps a covered path.
CatalystCover min_catalyst_set(std::span<const std::vector<RelPath>> pair_paths, std::size_t k);

/// Requires 2 <= |Q| <= 8 distinct peers.
SelectionResult connectivity_topk(const UncertainGraph& graph, const ConnectivityQuery& query,
                                  const SamplerConfig& cfg);

}  // namespace catrel
