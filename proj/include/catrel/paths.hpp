#pragma once

// Most-reliable path extraction. Every multi-catalyst edge is split into
// parallel single-catalyst edges weighted -log P(e|c), which turns the most
// reliable labelled paths into the shortest ones; a loopless (Yen-style)
// enumeration then lists them in order.

#include <span>
#include <vector>

#include "catrel/estimator.hpp"
#include "catrel/graph.hpp"

namespace catrel {

/// Single-catalyst multigraph. Node and catalyst ids match the source graph;
/// `origin[e]` is the source edge that multigraph edge e was split from. The
/// source graph must outlive the multigraph.
struct Multigraph {
  const UncertainGraph* source = nullptr;
  UncertainGraph graph;
  std::vector<EdgeIndex> origin;

  /// The only choice carried by multigraph edge e, expressed on the source
  /// graph.
  EdgeChoice choice(EdgeIndex e) const;
};

Multigraph build_multigraph(const UncertainGraph& graph);

/// Simple s-t path with one catalyst chosen per hop.
struct RelPath {
  std::vector<NodeId> nodes;         // s = nodes.front(), t = nodes.back()
  std::vector<EdgeChoice> choices;   // choices[i] joins nodes[i] and nodes[i+1]
  double reliability = 1.0;          // product of choice probabilities
  double weight = 0.0;               // sum of choice weights
  CatalystSet catalysts;

  NodeId source() const { return nodes.front(); }
  NodeId target() const { return nodes.back(); }
  std::size_t length() const { return choices.size(); }
};

/// Builds a path from its node sequence and choices, computing reliability,
/// weight and the catalyst set. Throws StructuralError when the choices do not
/// join consecutive nodes in `graph` or the node sequence repeats a node.
RelPath make_path(const UncertainGraph& graph, std::vector<NodeId> nodes, std::vector<EdgeChoice> choices);

/// Up to r distinct simple labelled paths from s to t in non-increasing
/// reliability order. Distinctness is over (node sequence, catalyst
/// sequence); weights within 1e-12 are ties, broken by node sequence and then
/// catalyst sequence. s == t yields the single zero-length path.
std::vector<RelPath> top_r_paths(const Multigraph& multigraph, NodeId s, NodeId t, std::size_t r);

/// All choices of all paths, concatenated.
std::vector<EdgeChoice> path_choices(std::span<const RelPath> paths);

InducedSubgraph induced_subgraph(const UncertainGraph& graph, std::span<const RelPath> paths);

/// Smallest r <= r_max such that adding the (r+1)-th most reliable path
/// raises the reliability of the induced subgraph by less than epsilon.
std::size_t suggest_r(const Multigraph& multigraph, NodeId s, NodeId t, double epsilon, std::size_t r_max,
                      const SamplerConfig& cfg);

/// Shared tolerance for weight ties in path and tree ordering.
inline constexpr double kWeightTieTolerance = 1e-12;

}  // namespace catrel
