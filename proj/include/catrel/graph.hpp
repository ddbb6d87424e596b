#pragma once

// Uncertain graph whose edge-existence probabilities are conditioned on a set
// of catalysts. An edge e exists under catalyst set C1 with probability
// 1 - prod_{c in C1} (1 - P(e|c)); catalysts missing from an edge's table
// contribute P(e|c) = 0.

#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "catrel/types.hpp"

namespace catrel {

struct CatalystEntry {
  CatalystId catalyst;
  double probability;  // in (0, 1]
};

struct EdgeRecord {
  NodeId src;
  NodeId dst;
  std::vector<CatalystEntry> table;  // sorted by catalyst, no duplicates

  /// P(e|c), zero when c is not in the table.
  double probability(CatalystId c) const;
  bool is_self_loop() const { return src == dst; }
};

/// Sorted, duplicate-free set of catalyst ids.
class CatalystSet {
 public:
  CatalystSet() = default;
  CatalystSet(std::initializer_list<CatalystId> ids);
  explicit CatalystSet(std::vector<CatalystId> ids);

  /// Every id in [0, n).
  static CatalystSet all(std::size_t n);

  bool insert(CatalystId c);
  bool erase(CatalystId c);
  bool contains(CatalystId c) const;
  void merge(const CatalystSet& other);

  /// Number of members of `other` not already in this set.
  std::size_t count_new(const CatalystSet& other) const;
  bool is_subset_of(const CatalystSet& other) const;

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  const std::vector<CatalystId>& ids() const { return ids_; }

  friend bool operator==(const CatalystSet&, const CatalystSet&) = default;
  friend auto operator<=>(const CatalystSet& a, const CatalystSet& b) { return a.ids_ <=> b.ids_; }

 private:
  std::vector<CatalystId> ids_;
};

/// Directed, multigraph-capable uncertain graph G = (V, E, C, P).
///
/// Built incrementally through the add_* members and treated as immutable
/// afterwards; all queries are const and safe to share between threads.
class UncertainGraph {
 public:
  NodeId add_node(std::string label = {});
  CatalystId add_catalyst(std::string label);
  /// Appends a new edge record. The table is sorted and validated: it must be
  /// non-empty, reference known catalysts once each, and hold probabilities
  /// in (0, 1].
  EdgeIndex add_edge(NodeId src, NodeId dst, std::vector<CatalystEntry> table);

  std::size_t node_count() const { return node_labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t catalyst_count() const { return catalyst_labels_.size(); }

  const EdgeRecord& edge(EdgeIndex e) const { return edges_.at(e); }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  std::span<const EdgeIndex> out_edges(NodeId v) const { return out_.at(index(v)); }
  std::span<const EdgeIndex> in_edges(NodeId v) const { return in_.at(index(v)); }

  const std::string& node_label(NodeId v) const { return node_labels_.at(index(v)); }
  const std::string& catalyst_label(CatalystId c) const { return catalyst_labels_.at(index(c)); }
  std::optional<NodeId> find_node(const std::string& label) const;
  std::optional<CatalystId> find_catalyst(const std::string& label) const;

  bool has_node(NodeId v) const { return index(v) < node_count(); }
  bool has_catalyst(CatalystId c) const { return index(c) < catalyst_count(); }
  void require_node(NodeId v) const;

  CatalystSet all_catalysts() const { return CatalystSet::all(catalyst_count()); }

 private:
  std::vector<std::string> node_labels_;
  std::vector<std::string> catalyst_labels_;
  std::unordered_map<std::string, NodeId> node_by_label_;
  std::unordered_map<std::string, CatalystId> catalyst_by_label_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
};

/// Deterministic graph sampled from an uncertain graph: bit e set iff edge e
/// is present.
struct PossibleWorld {
  std::vector<bool> present;
};

/// P(e|C1) = 1 - prod_{c in cats} (1 - P(e|c)); zero for an empty set.
double edge_probability(const EdgeRecord& edge, const CatalystSet& cats);

/// P(G|C1): product of P(e|C1) over present edges and 1 - P(e|C1) over absent
/// ones.
double world_probability(const UncertainGraph& graph, const PossibleWorld& world,
                         const CatalystSet& cats);

/// P(e|C1) for every edge of the graph, indexed by edge.
std::vector<double> edge_probabilities(const UncertainGraph& graph, const CatalystSet& cats);

/// One (edge, catalyst) pair chosen from the table of an original edge, with
/// the probability and -log weight it carries.
struct EdgeChoice {
  EdgeIndex edge;
  CatalystId catalyst;
  double probability;
  double weight;

  friend bool operator==(const EdgeChoice& a, const EdgeChoice& b) {
    return a.edge == b.edge && a.catalyst == b.catalyst;
  }
};

/// -log(p), exactly zero for p = 1.
double choice_weight(double probability);

/// Builds the choice for (e, c); throws StructuralError when c is not in the
/// table of e.
EdgeChoice make_choice(const UncertainGraph& graph, EdgeIndex e, CatalystId c);

/// Graph restricted to a set of edge choices, with maps back to the original
/// node and edge ids. Catalyst ids are shared with the original graph.
struct InducedSubgraph {
  UncertainGraph graph;
  std::vector<NodeId> node_origin;     // local node -> original node
  std::vector<EdgeIndex> edge_origin;  // local edge -> original edge

  std::optional<NodeId> local(NodeId original) const;
  /// Catalysts appearing on any edge of the subgraph.
  CatalystSet catalysts() const;
};

/// Subgraph holding exactly the given (edge, catalyst) pairs. Nodes are the
/// endpoints of used edges, ordered by original id; edges are ordered by
/// original index.
InducedSubgraph induced_subgraph(const UncertainGraph& graph, std::span<const EdgeChoice> choices);

}  // namespace catrel
