#pragma once

// Exact, exponential-time ground truth by possible-world enumeration. Only
// edges with positive probability under the catalyst set are enumerated;
// zero-probability edges are absent in every world and contribute a factor
// of one.

#include <cstdint>
#include <span>

#include "catrel/graph.hpp"

namespace catrel {

struct OracleOptions {
  std::size_t max_edges = 25;  // positive-probability edges allowed
  unsigned workers = 1;        // result is bitwise-independent of this
};

struct ExactResult {
  double value = 0.0;
  std::uint64_t worlds_enumerated = 0;
};

/// R((s,t)|cats): probability that t is reachable from s along directed,
/// present, non-self-loop edges. s == t short-circuits to 1 without
/// enumeration.
ExactResult exact_reliability(const UncertainGraph& graph, NodeId s, NodeId t, const CatalystSet& cats,
                              const OracleOptions& options = {});

/// Probability that all of q lie in one weakly connected component.
/// Requires |q| >= 2.
ExactResult exact_connectivity(const UncertainGraph& graph, std::span<const NodeId> q, const CatalystSet& cats,
                               const OracleOptions& options = {});

struct TopkResult {
  CatalystSet catalysts;
  double reliability = 0.0;
};

/// Brute force over all size-k catalyst subsets; ties keep the
/// lexicographically smallest subset. Refuses more than `max_subsets` subsets.
TopkResult exhaustive_topk(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k,
                           const OracleOptions& options = {}, std::uint64_t max_subsets = 100000);

/// Number of edges with P(e|cats) > 0, ignoring self-loops.
std::size_t positive_edge_count(const UncertainGraph& graph, const CatalystSet& cats);

}  // namespace catrel
