#include "catrel/paths.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <string>

#include "catrel/evaluate.hpp"

namespace catrel {

EdgeChoice Multigraph::choice(EdgeIndex e) const {
  const auto& entry = graph.edge(e).table.front();
  return EdgeChoice{origin.at(e), entry.catalyst, entry.probability, choice_weight(entry.probability)};
}

Multigraph build_multigraph(const UncertainGraph& graph) {
  Multigraph mg;
  mg.source = &graph;
  for (std::size_t c = 0; c < graph.catalyst_count(); ++c) mg.graph.add_catalyst(graph.catalyst_label(catalyst(c)));
  for (std::size_t v = 0; v < graph.node_count(); ++v) mg.graph.add_node(graph.node_label(node(v)));
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
    const auto& rec = graph.edge(e);
    for (const auto& entry : rec.table) {
      mg.graph.add_edge(rec.src, rec.dst, {entry});
      mg.origin.push_back(e);
    }
  }
  return mg;
}

RelPath make_path(const UncertainGraph& graph, std::vector<NodeId> nodes, std::vector<EdgeChoice> choices) {
  if (nodes.empty() || nodes.size() != choices.size() + 1)
    throw StructuralError("path needs one more node than choices");
  for (NodeId v : nodes) graph.require_node(v);
  std::vector<NodeId> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StructuralError("path repeats a node");

  RelPath path;
  std::vector<CatalystId> cats;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const EdgeChoice checked = make_choice(graph, choices[i].edge, choices[i].catalyst);
    const auto& rec = graph.edge(checked.edge);
    if (rec.src != nodes[i] || rec.dst != nodes[i + 1])
      throw StructuralError("edge " + std::to_string(checked.edge) + " does not join consecutive path nodes");
    path.reliability *= checked.probability;
    path.weight += checked.weight;
    cats.push_back(checked.catalyst);
    path.choices.push_back(checked);
  }
  path.nodes = std::move(nodes);
  path.catalysts = CatalystSet(std::move(cats));
  return path;
}

namespace {

struct RawPath {
  std::vector<EdgeIndex> edges;  // multigraph edges
  std::vector<NodeId> nodes;
  double weight = 0.0;
};

double path_weight(const Multigraph& mg, const std::vector<EdgeIndex>& edges) {
  double w = 0.0;
  for (EdgeIndex e : edges) w += choice_weight(mg.graph.edge(e).table.front().probability);
  return w;
}

std::vector<CatalystId> catalyst_sequence(const Multigraph& mg, const RawPath& p) {
  std::vector<CatalystId> cats;
  cats.reserve(p.edges.size());
  for (EdgeIndex e : p.edges) cats.push_back(mg.graph.edge(e).table.front().catalyst);
  return cats;
}

// Dijkstra from `from` to `to` avoiding blocked nodes and edges. Ties keep
// the first label found, so the result is deterministic.
std::optional<RawPath> shortest_path(const Multigraph& mg, NodeId from, NodeId to,
                                     const std::vector<char>& blocked_node, const std::vector<char>& blocked_edge) {
  const auto& g = mg.graph;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.node_count(), kInf);
  std::vector<EdgeIndex> parent(g.node_count(), std::numeric_limits<EdgeIndex>::max());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[index(from)] = 0.0;
  heap.push({0.0, index(from)});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    if (u == index(to)) break;
    for (EdgeIndex e : g.out_edges(node(u))) {
      const auto& rec = g.edge(e);
      const std::size_t v = index(rec.dst);
      if (blocked_edge[e] || blocked_node[v] || rec.is_self_loop()) continue;
      const double nd = d + choice_weight(rec.table.front().probability);
      if (nd < dist[v]) {
        dist[v] = nd;
        parent[v] = e;
        heap.push({nd, v});
      }
    }
  }
  if (dist[index(to)] == kInf) return std::nullopt;

  RawPath p;
  for (std::size_t v = index(to); v != index(from);) {
    const EdgeIndex e = parent[v];
    p.edges.push_back(e);
    v = index(g.edge(e).src);
  }
  std::reverse(p.edges.begin(), p.edges.end());
  p.nodes.push_back(from);
  for (EdgeIndex e : p.edges) p.nodes.push_back(g.edge(e).dst);
  return p;
}

// Sorts by weight, then orders each run of tied weights (within the
// tolerance of the run's first element) by node and catalyst sequence.
template <typename T, typename WeightOf, typename KeyLess>
void tie_sort(std::vector<T>& items, WeightOf weight_of, KeyLess key_less) {
  std::stable_sort(items.begin(), items.end(), [&](const T& a, const T& b) { return weight_of(a) < weight_of(b); });
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i + 1;
    while (j < items.size() && weight_of(items[j]) - weight_of(items[i]) <= kWeightTieTolerance) ++j;
    std::stable_sort(items.begin() + static_cast<std::ptrdiff_t>(i), items.begin() + static_cast<std::ptrdiff_t>(j),
                     key_less);
    i = j;
  }
}

}  // namespace

std::vector<RelPath> top_r_paths(const Multigraph& mg, NodeId s, NodeId t, std::size_t r) {
  const auto& g = mg.graph;
  g.require_node(s);
  g.require_node(t);
  if (r == 0) throw PreconditionError("r must be at least 1");
  if (s == t) return {RelPath{{s}, {}, 1.0, 0.0, {}}};

  // Keep enumerating past the r-th distinct path while candidates tie with
  // it, so the final tie-break sees every tied path. The cap bounds the work
  // on graphs with huge tie classes (e.g. many probability-1 paths).
  const std::size_t hard_cap = r + 4096;
  std::vector<char> blocked_node(g.node_count(), 0);
  std::vector<char> blocked_edge(g.edge_count(), 0);

  auto first = shortest_path(mg, s, t, blocked_node, blocked_edge);
  if (!first) return {};
  first->weight = path_weight(mg, first->edges);

  auto candidate_less = [](const RawPath& a, const RawPath& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    return a.edges < b.edges;
  };
  std::set<RawPath, decltype(candidate_less)> candidates(candidate_less);
  std::set<std::vector<EdgeIndex>> seen{first->edges};
  std::vector<RawPath> accepted{*first};
  std::set<std::pair<std::vector<NodeId>, std::vector<CatalystId>>> distinct{
      {first->nodes, catalyst_sequence(mg, *first)}};
  double rth_weight = distinct.size() == r ? first->weight : std::numeric_limits<double>::infinity();

  while (accepted.size() < hard_cap) {
    const RawPath last = accepted.back();
    for (std::size_t i = 0; i + 1 < last.nodes.size(); ++i) {
      const NodeId spur = last.nodes[i];
      const std::vector<EdgeIndex> root(last.edges.begin(), last.edges.begin() + static_cast<std::ptrdiff_t>(i));
      for (const auto& p : accepted)
        if (p.edges.size() > i && std::equal(root.begin(), root.end(), p.edges.begin())) blocked_edge[p.edges[i]] = 1;
      for (std::size_t j = 0; j < i; ++j) blocked_node[index(last.nodes[j])] = 1;

      if (auto tail = shortest_path(mg, spur, t, blocked_node, blocked_edge)) {
        RawPath cand;
        cand.edges = root;
        cand.edges.insert(cand.edges.end(), tail->edges.begin(), tail->edges.end());
        if (seen.insert(cand.edges).second) {
          cand.nodes.assign(last.nodes.begin(), last.nodes.begin() + static_cast<std::ptrdiff_t>(i));
          cand.nodes.insert(cand.nodes.end(), tail->nodes.begin(), tail->nodes.end());
          cand.weight = path_weight(mg, cand.edges);
          candidates.insert(std::move(cand));
        }
      }
      std::fill(blocked_edge.begin(), blocked_edge.end(), 0);
      std::fill(blocked_node.begin(), blocked_node.end(), 0);
    }
    if (candidates.empty()) break;
    auto next = candidates.begin();
    if (distinct.size() >= r && next->weight > rth_weight + kWeightTieTolerance) break;
    RawPath p = *next;
    candidates.erase(next);
    if (distinct.emplace(p.nodes, catalyst_sequence(mg, p)).second && distinct.size() == r) rth_weight = p.weight;
    accepted.push_back(std::move(p));
  }

  // Collapse paths that differ only by parallel edges with the same catalyst.
  std::vector<RawPath> unique;
  std::set<std::pair<std::vector<NodeId>, std::vector<CatalystId>>> kept;
  for (auto& p : accepted)
    if (kept.emplace(p.nodes, catalyst_sequence(mg, p)).second) unique.push_back(std::move(p));

  tie_sort(
      unique, [](const RawPath& p) { return p.weight; },
      [&](const RawPath& a, const RawPath& b) {
        if (a.nodes != b.nodes) return a.nodes < b.nodes;
        return catalyst_sequence(mg, a) < catalyst_sequence(mg, b);
      });
  if (unique.size() > r) unique.resize(r);

  std::vector<RelPath> out;
  out.reserve(unique.size());
  for (const auto& p : unique) {
    RelPath path;
    path.nodes = p.nodes;
    std::vector<CatalystId> cats;
    for (EdgeIndex e : p.edges) {
      const EdgeChoice c = mg.choice(e);
      path.reliability *= c.probability;
      path.weight += c.weight;
      cats.push_back(c.catalyst);
      path.choices.push_back(c);
    }
    path.catalysts = CatalystSet(std::move(cats));
    out.push_back(std::move(path));
  }
  return out;
}

std::vector<EdgeChoice> path_choices(std::span<const RelPath> paths) {
  std::vector<EdgeChoice> all;
  for (const auto& p : paths) all.insert(all.end(), p.choices.begin(), p.choices.end());
  return all;
}

InducedSubgraph induced_subgraph(const UncertainGraph& graph, std::span<const RelPath> paths) {
  const auto choices = path_choices(paths);
  return induced_subgraph(graph, std::span<const EdgeChoice>(choices));
}

std::size_t suggest_r(const Multigraph& mg, NodeId s, NodeId t, double epsilon, std::size_t r_max,
                      const SamplerConfig& cfg) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (r_max == 0) throw PreconditionError("r_max must be at least 1");
  if (!mg.source) throw PreconditionError("multigraph has no source graph");
  const auto paths = top_r_paths(mg, s, t, r_max + 1);

  auto reliability_of = [&](std::size_t count) {
    count = std::min(count, paths.size());
    if (count == 0) return 0.0;
    const auto sub = induced_subgraph(*mg.source, std::span<const RelPath>(paths.data(), count));
    const auto ls = sub.local(s);
    const auto lt = sub.local(t);
    if (!ls || !lt) return s == t ? 1.0 : 0.0;
    return evaluate_reliability(sub.graph, *ls, *lt, sub.catalysts(), cfg).value;
  };

  double current = reliability_of(1);
  for (std::size_t r = 1; r < r_max; ++r) {
    const double next = reliability_of(r + 1);
    if (next - current < epsilon) return r;
    current = next;
  }
  return r_max;
}

}  // namespace catrel
