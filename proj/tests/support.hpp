#pragma once

// Test-side oracles and instance generators. Everything here is written
// independently of the library internals: plain binary world enumeration,
// a flip-every-edge sampler on std::mt19937_64, brute-force path and tree
// enumeration.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "catrel/graph.hpp"
#include "catrel/graph_io.hpp"
#include "catrel/paths.hpp"

namespace testing_support {

using namespace catrel;

inline std::string data_path(const std::string& name) { return std::string(CATREL_TEST_DATA) + "/" + name; }

inline UncertainGraph load_fixture(const std::string& name) { return load_graph(data_path(name)).graph; }

inline NodeId N(const UncertainGraph& g, const std::string& label) { return *g.find_node(label); }
inline CatalystId C(const UncertainGraph& g, const std::string& label) { return *g.find_catalyst(label); }

inline CatalystSet cats(const UncertainGraph& g, std::initializer_list<const char*> labels) {
  CatalystSet out;
  for (const char* l : labels) out.insert(C(g, l));
  return out;
}

// Edge probability straight from the definition.
inline double naive_edge_probability(const EdgeRecord& e, const CatalystSet& chosen) {
  double miss = 1.0;
  for (const auto& entry : e.table)
    if (chosen.contains(entry.catalyst)) miss *= 1.0 - entry.probability;
  return 1.0 - miss;
}

inline bool reachable(const UncertainGraph& g, const std::vector<bool>& present, NodeId s, NodeId t) {
  std::vector<bool> seen(g.node_count());
  std::vector<NodeId> stack{s};
  seen[index(s)] = true;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (u == t) return true;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!present[e] || g.edge(e).src != u) continue;
      const NodeId v = g.edge(e).dst;
      if (!seen[index(v)]) {
        seen[index(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

inline bool weakly_joined(const UncertainGraph& g, const std::vector<bool>& present, const std::vector<NodeId>& q) {
  std::vector<std::size_t> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (present[e]) parent[find(index(g.edge(e).src))] = find(index(g.edge(e).dst));
  for (NodeId v : q)
    if (find(index(v)) != find(index(q.front()))) return false;
  return true;
}

// Sum of world probabilities over all 2^m worlds in plain binary order.
template <typename Holds>
double enumerate(const UncertainGraph& g, const CatalystSet& chosen, Holds holds) {
  const std::size_t m = g.edge_count();
  std::vector<double> p(m);
  for (std::size_t e = 0; e < m; ++e) p[e] = naive_edge_probability(g.edge(e), chosen);
  double total = 0.0;
  std::vector<bool> present(m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double w = 1.0;
    for (std::size_t e = 0; e < m; ++e) {
      present[e] = (mask >> e) & 1;
      w *= present[e] ? p[e] : 1.0 - p[e];
    }
    if (w > 0.0 && holds(present)) total += w;
  }
  return total;
}

inline double naive_reliability(const UncertainGraph& g, NodeId s, NodeId t, const CatalystSet& chosen) {
  if (s == t) return 1.0;
  return enumerate(g, chosen, [&](const std::vector<bool>& present) { return reachable(g, present, s, t); });
}

inline double naive_connectivity(const UncertainGraph& g, const std::vector<NodeId>& q, const CatalystSet& chosen) {
  return enumerate(g, chosen, [&](const std::vector<bool>& present) { return weakly_joined(g, present, q); });
}

// Flips every edge in every trial; no laziness, no early exit.
inline double flip_all_sampler(const UncertainGraph& g, NodeId s, NodeId t, const CatalystSet& chosen,
                               std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) p[e] = naive_edge_probability(g.edge(e), chosen);
  std::size_t hits = 0;
  std::vector<bool> present(g.edge_count());
  for (std::size_t i = 0; i < samples; ++i) {
    for (std::size_t e = 0; e < g.edge_count(); ++e) present[e] = u(rng) < p[e];
    hits += reachable(g, present, s, t);
  }
  return static_cast<double>(hits) / static_cast<double>(samples);
}

struct RandomGraphSpec {
  std::size_t max_nodes = 8;
  std::size_t max_edges = 12;
  std::size_t max_catalysts = 5;
  std::size_t max_table = 3;
};

inline UncertainGraph random_graph(std::mt19937_64& rng, const RandomGraphSpec& spec = {}) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::uniform_real_distribution<double> prob(0.05, 1.0);
  UncertainGraph g;
  const std::size_t n = pick(2, spec.max_nodes);
  const std::size_t c = pick(1, spec.max_catalysts);
  for (std::size_t i = 0; i < c; ++i) g.add_catalyst({});
  for (std::size_t i = 0; i < n; ++i) g.add_node("v" + std::to_string(i));
  const std::size_t m = pick(1, spec.max_edges);
  for (std::size_t e = 0; e < m; ++e) {
    const std::size_t u = pick(0, n - 1);
    std::size_t v = pick(0, n - 2);
    if (v >= u) ++v;
    std::vector<CatalystId> pool(c);
    for (std::size_t i = 0; i < c; ++i) pool[i] = catalyst(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<CatalystEntry> table;
    const std::size_t size = pick(1, std::min(spec.max_table, c));
    for (std::size_t i = 0; i < size; ++i) table.push_back({pool[i], prob(rng) > 0.97 ? 1.0 : prob(rng)});
    g.add_edge(node(u), node(v), table);
  }
  return g;
}

inline CatalystSet random_subset(std::mt19937_64& rng, std::size_t n) {
  CatalystSet out;
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1) out.insert(catalyst(i));
  return out;
}

// s = node 0, t = node 1, `paths` s-t paths with private interior nodes.
struct DisjointInstance {
  UncertainGraph graph;
  std::vector<RelPath> paths;  // one choice per edge, as drawn
};

inline DisjointInstance random_disjoint_paths(std::mt19937_64& rng, std::size_t paths, std::size_t catalysts,
                                              std::size_t max_len = 3) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::uniform_real_distribution<double> prob(0.1, 0.95);
  DisjointInstance inst;
  auto& g = inst.graph;
  for (std::size_t i = 0; i < catalysts; ++i) g.add_catalyst({});
  g.add_node("s");
  g.add_node("t");
  std::vector<std::pair<std::vector<NodeId>, std::vector<EdgeChoice>>> raw;
  for (std::size_t p = 0; p < paths; ++p) {
    const std::size_t len = pick(1, max_len);
    std::vector<NodeId> nodes{node(0)};
    for (std::size_t i = 1; i < len; ++i) nodes.push_back(g.add_node("p" + std::to_string(p) + "_" + std::to_string(i)));
    nodes.push_back(node(1));
    std::vector<EdgeChoice> choices;
    for (std::size_t i = 0; i < len; ++i) {
      const CatalystId c = catalyst(pick(0, catalysts - 1));
      const EdgeIndex e = g.add_edge(nodes[i], nodes[i + 1], {{c, prob(rng)}});
      choices.push_back({e, c, 0.0, 0.0});
    }
    raw.emplace_back(nodes, choices);
  }
  for (auto& [nodes, choices] : raw) inst.paths.push_back(make_path(g, nodes, choices));
  return inst;
}

// All simple s-t paths of the multigraph, brute force.
inline std::vector<RelPath> all_simple_paths(const Multigraph& mg, NodeId s, NodeId t) {
  const auto& g = mg.graph;
  std::vector<RelPath> out;
  std::vector<NodeId> nodes{s};
  std::vector<EdgeIndex> edges;
  std::vector<bool> on(g.node_count());
  on[index(s)] = true;
  std::function<void(NodeId)> dfs = [&](NodeId u) {
    if (u == t) {
      std::vector<EdgeChoice> choices;
      for (EdgeIndex e : edges) choices.push_back(mg.choice(e));
      out.push_back(make_path(*mg.source, nodes, choices));
      return;
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& rec = g.edge(e);
      if (rec.src != u || on[index(rec.dst)]) continue;
      on[index(rec.dst)] = true;
      nodes.push_back(rec.dst);
      edges.push_back(e);
      dfs(rec.dst);
      edges.pop_back();
      nodes.pop_back();
      on[index(rec.dst)] = false;
    }
  };
  dfs(s);
  return out;
}

// Weights of every multigraph edge subset that forms a tree spanning q with
// all leaves in q, ascending.
inline std::vector<double> all_steiner_weights(const Multigraph& mg, const std::vector<NodeId>& q) {
  const auto& g = mg.graph;
  const std::size_t m = g.edge_count();
  std::vector<double> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<std::size_t> parent(g.node_count());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::vector<std::size_t> degree(g.node_count());
    bool cycle = false;
    double w = 0.0;
    for (std::size_t e = 0; e < m && !cycle; ++e) {
      if (!((mask >> e) & 1)) continue;
      const auto& rec = g.edge(e);
      const std::size_t a = find(index(rec.src));
      const std::size_t b = find(index(rec.dst));
      if (a == b) cycle = true;
      parent[a] = b;
      ++degree[index(rec.src)];
      ++degree[index(rec.dst)];
      w += choice_weight(rec.table.front().probability);
    }
    if (cycle) continue;
    bool ok = true;
    const std::size_t root = find(index(q.front()));
    for (NodeId v : q) ok = ok && find(index(v)) == root;
    for (std::size_t v = 0; v < g.node_count() && ok; ++v) {
      if (degree[v] == 0) continue;
      if (find(v) != root) ok = false;
      const bool terminal = std::find(q.begin(), q.end(), node(v)) != q.end();
      if (degree[v] == 1 && !terminal) ok = false;
    }
    if (ok) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace testing_support
