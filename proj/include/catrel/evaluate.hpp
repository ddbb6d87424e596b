#pragma once

// Reliability evaluation used inside the selection algorithms: exact
// enumeration while the number of positive-probability edges stays within
// `exact_edge_limit`, Monte Carlo otherwise.

#include <span>

#include "catrel/estimator.hpp"
#include "catrel/graph.hpp"

namespace catrel {

inline constexpr std::size_t kDefaultExactEdgeLimit = 20;

struct Evaluation {
  double value = 0.0;
  bool exact = false;
  std::size_t samples = 0;  // zero when exact
};

Evaluation evaluate_reliability(const UncertainGraph& graph, NodeId s, NodeId t, const CatalystSet& cats,
                                const SamplerConfig& cfg, std::size_t exact_edge_limit = kDefaultExactEdgeLimit);

Evaluation evaluate_connectivity(const UncertainGraph& graph, std::span<const NodeId> q, const CatalystSet& cats,
                                 const SamplerConfig& cfg, std::size_t exact_edge_limit = kDefaultExactEdgeLimit);

}  // namespace catrel
