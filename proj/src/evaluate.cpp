#include "catrel/evaluate.hpp"

#include "catrel/oracle.hpp"

namespace catrel {

Evaluation evaluate_reliability(const UncertainGraph& graph, NodeId s, NodeId t, const CatalystSet& cats,
                                const SamplerConfig& cfg, std::size_t exact_edge_limit) {
  if (s == t || positive_edge_count(graph, cats) <= exact_edge_limit) {
    OracleOptions options;
    options.max_edges = exact_edge_limit;
    options.workers = cfg.parallelism;
    return Evaluation{exact_reliability(graph, s, t, cats, options).value, true, 0};
  }
  const NodeId sources[] = {s};
  const auto estimate = mc_reliability(graph, sources, t, cats, cfg);
  return Evaluation{estimate.value, false, estimate.samples};
}

Evaluation evaluate_connectivity(const UncertainGraph& graph, std::span<const NodeId> q, const CatalystSet& cats,
                                 const SamplerConfig& cfg, std::size_t exact_edge_limit) {
  if (positive_edge_count(graph, cats) <= exact_edge_limit) {
    OracleOptions options;
    options.max_edges = exact_edge_limit;
    options.workers = cfg.parallelism;
    return Evaluation{exact_connectivity(graph, q, cats, options).value, true, 0};
  }
  const auto estimate = mc_connectivity(graph, q, cats, cfg);
  return Evaluation{estimate.value, false, estimate.samples};
}

}  // namespace catrel
