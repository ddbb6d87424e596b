#include "catrel/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace catrel {

double EdgeRecord::probability(CatalystId c) const {
  auto it = std::lower_bound(table.begin(), table.end(), c,
                             [](const CatalystEntry& e, CatalystId id) { return e.catalyst < id; });
  return (it != table.end() && it->catalyst == c) ? it->probability : 0.0;
}

CatalystSet::CatalystSet(std::initializer_list<CatalystId> ids) : CatalystSet(std::vector<CatalystId>(ids)) {}

CatalystSet::CatalystSet(std::vector<CatalystId> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

CatalystSet CatalystSet::all(std::size_t n) {
  CatalystSet s;
  s.ids_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.ids_.push_back(catalyst(i));
  return s;
}

bool CatalystSet::insert(CatalystId c) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), c);
  if (it != ids_.end() && *it == c) return false;
  ids_.insert(it, c);
  return true;
}

bool CatalystSet::erase(CatalystId c) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), c);
  if (it == ids_.end() || *it != c) return false;
  ids_.erase(it);
  return true;
}

bool CatalystSet::contains(CatalystId c) const { return std::binary_search(ids_.begin(), ids_.end(), c); }

void CatalystSet::merge(const CatalystSet& other) {
  std::vector<CatalystId> out;
  out.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out));
  ids_ = std::move(out);
}

std::size_t CatalystSet::count_new(const CatalystSet& other) const {
  std::size_t n = 0;
  for (CatalystId c : other.ids_)
    if (!contains(c)) ++n;
  return n;
}

bool CatalystSet::is_subset_of(const CatalystSet& other) const {
  return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
}

NodeId UncertainGraph::add_node(std::string label) {
  const NodeId id = node(node_labels_.size());
  if (!label.empty()) {
    if (!node_by_label_.emplace(label, id).second)
      throw StructuralError("duplicate node label '" + label + "'");
  }
  node_labels_.push_back(std::move(label));
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

CatalystId UncertainGraph::add_catalyst(std::string label) {
  const CatalystId id = catalyst(catalyst_labels_.size());
  if (label.empty()) label = "c" + std::to_string(index(id));
  if (!catalyst_by_label_.emplace(label, id).second)
    throw StructuralError("duplicate catalyst label '" + label + "'");
  catalyst_labels_.push_back(std::move(label));
  return id;
}

EdgeIndex UncertainGraph::add_edge(NodeId src, NodeId dst, std::vector<CatalystEntry> table) {
  require_node(src);
  require_node(dst);
  if (table.empty()) throw StructuralError("edge with an empty catalyst table");
  std::sort(table.begin(), table.end(),
            [](const CatalystEntry& a, const CatalystEntry& b) { return a.catalyst < b.catalyst; });
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& entry = table[i];
    if (!has_catalyst(entry.catalyst))
      throw StructuralError("unknown catalyst " + std::to_string(index(entry.catalyst)));
    if (!(entry.probability > 0.0 && entry.probability <= 1.0))
      throw StructuralError("edge probability must lie in (0,1]");
    if (i > 0 && table[i - 1].catalyst == entry.catalyst)
      throw StructuralError("catalyst listed twice in one edge table");
  }
  const EdgeIndex e = edges_.size();
  edges_.push_back(EdgeRecord{src, dst, std::move(table)});
  out_[index(src)].push_back(e);
  in_[index(dst)].push_back(e);
  return e;
}

std::optional<NodeId> UncertainGraph::find_node(const std::string& label) const {
  auto it = node_by_label_.find(label);
  if (it == node_by_label_.end()) return std::nullopt;
  return it->second;
}

std::optional<CatalystId> UncertainGraph::find_catalyst(const std::string& label) const {
  auto it = catalyst_by_label_.find(label);
  if (it == catalyst_by_label_.end()) return std::nullopt;
  return it->second;
}

void UncertainGraph::require_node(NodeId v) const {
  if (!has_node(v)) throw StructuralError("unknown node " + std::to_string(index(v)));
}

double edge_probability(const EdgeRecord& edge, const CatalystSet& cats) {
  double absent = 1.0;
  auto it = cats.begin();
  for (const auto& entry : edge.table) {
    it = std::lower_bound(it, cats.end(), entry.catalyst);
    if (it == cats.end()) break;
    if (*it == entry.catalyst) absent *= 1.0 - entry.probability;
  }
  return 1.0 - absent;
}

std::vector<double> edge_probabilities(const UncertainGraph& graph, const CatalystSet& cats) {
  std::vector<double> p(graph.edge_count());
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) p[e] = edge_probability(graph.edge(e), cats);
  return p;
}

double world_probability(const UncertainGraph& graph, const PossibleWorld& world, const CatalystSet& cats) {
  if (world.present.size() != graph.edge_count())
    throw PreconditionError("world size does not match edge count");
  double prob = 1.0;
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
    const double p = edge_probability(graph.edge(e), cats);
    prob *= world.present[e] ? p : 1.0 - p;
  }
  return prob;
}

double choice_weight(double probability) { return probability >= 1.0 ? 0.0 : -std::log(probability); }

EdgeChoice make_choice(const UncertainGraph& graph, EdgeIndex e, CatalystId c) {
  if (e >= graph.edge_count()) throw StructuralError("unknown edge " + std::to_string(e));
  const double p = graph.edge(e).probability(c);
  if (p <= 0.0)
    throw StructuralError("catalyst " + std::to_string(index(c)) + " not on edge " + std::to_string(e));
  return EdgeChoice{e, c, p, choice_weight(p)};
}

std::optional<NodeId> InducedSubgraph::local(NodeId original) const {
  auto it = std::lower_bound(node_origin.begin(), node_origin.end(), original);
  if (it == node_origin.end() || *it != original) return std::nullopt;
  return node(static_cast<std::size_t>(it - node_origin.begin()));
}

CatalystSet InducedSubgraph::catalysts() const {
  std::vector<CatalystId> ids;
  for (const auto& e : graph.edges())
    for (const auto& entry : e.table) ids.push_back(entry.catalyst);
  return CatalystSet(std::move(ids));
}

InducedSubgraph induced_subgraph(const UncertainGraph& graph, std::span<const EdgeChoice> choices) {
  std::map<EdgeIndex, std::map<CatalystId, double>> used;
  for (const auto& choice : choices) {
    const EdgeChoice checked = make_choice(graph, choice.edge, choice.catalyst);
    used[checked.edge][checked.catalyst] = checked.probability;
  }

  InducedSubgraph sub;
  for (const auto& [e, table] : used) {
    sub.node_origin.push_back(graph.edge(e).src);
    sub.node_origin.push_back(graph.edge(e).dst);
  }
  std::sort(sub.node_origin.begin(), sub.node_origin.end());
  sub.node_origin.erase(std::unique(sub.node_origin.begin(), sub.node_origin.end()), sub.node_origin.end());

  for (std::size_t c = 0; c < graph.catalyst_count(); ++c) sub.graph.add_catalyst(graph.catalyst_label(catalyst(c)));
  // Labels stay unique because they are copied from a graph where they were.
  for (NodeId v : sub.node_origin) sub.graph.add_node(graph.node_label(v));
  for (const auto& [e, table] : used) {
    std::vector<CatalystEntry> entries;
    for (const auto& [c, p] : table) entries.push_back({c, p});
    sub.graph.add_edge(*sub.local(graph.edge(e).src), *sub.local(graph.edge(e).dst), std::move(entries));
    sub.edge_origin.push_back(e);
  }
  return sub;
}

}  // namespace catrel
