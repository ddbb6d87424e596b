#include "catrel/steiner.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <string>

namespace catrel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxExpansions = 20000;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Tree {
  std::vector<EdgeIndex> edges;  // multigraph edges, sorted
  double weight = 0.0;
  bool minimal = true;  // every leaf is a query node
};

class SteinerSolver {
 public:
  SteinerSolver(const Multigraph& mg, std::vector<NodeId> peers) : mg_(mg), g_(mg.graph), peers_(std::move(peers)) {
    is_peer_.assign(g_.node_count(), 0);
    for (NodeId v : peers_) is_peer_[index(v)] = 1;
  }

  double weight(EdgeIndex e) const { return choice_weight(g_.edge(e).table.front().probability); }

  // Minimum tree containing every forced edge and no excluded edge. Forced
  // edges must form a connected subtree holding peers_.front().
  std::optional<Tree> solve(const std::vector<EdgeIndex>& forced, const std::vector<EdgeIndex>& excluded) const {
    const std::size_t n = g_.node_count();
    DisjointSets comps(n);
    for (EdgeIndex e : forced) comps.unite(index(g_.edge(e).src), index(g_.edge(e).dst));

    std::vector<std::size_t> local(n, 0);
    std::vector<std::size_t> reps;
    for (std::size_t v = 0; v < n; ++v)
      if (comps.find(v) == v) {
        local[v] = reps.size();
        reps.push_back(v);
      }
    auto local_of = [&](NodeId v) { return local[comps.find(index(v))]; };

    std::vector<std::size_t> terminals;
    for (NodeId v : peers_) terminals.push_back(local_of(v));
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());

    std::vector<char> skip(g_.edge_count(), 0);
    for (EdgeIndex e : forced) skip[e] = 1;
    for (EdgeIndex e : excluded) skip[e] = 1;
    struct Arc {
      std::size_t to;
      EdgeIndex edge;
    };
    std::vector<std::vector<Arc>> adj(reps.size());
    for (EdgeIndex e = 0; e < g_.edge_count(); ++e) {
      if (skip[e]) continue;
      const std::size_t a = local_of(g_.edge(e).src);
      const std::size_t b = local_of(g_.edge(e).dst);
      if (a == b) continue;
      adj[a].push_back({b, e});
      adj[b].push_back({a, e});
    }

    std::vector<EdgeIndex> chosen;
    if (terminals.size() > 1) {
      auto edges = dreyfus_wagner(adj, terminals);
      if (!edges) return std::nullopt;
      chosen = std::move(*edges);
    }

    // Drop any cycle the subtree union may have closed through zero-weight
    // edges, then prune non-query leaves outside the forced part.
    std::sort(chosen.begin(), chosen.end(), [&](EdgeIndex a, EdgeIndex b) {
      return weight(a) != weight(b) ? weight(a) < weight(b) : a < b;
    });
    DisjointSets forest(reps.size());
    std::vector<EdgeIndex> tree_edges = forced;
    for (EdgeIndex e : chosen)
      if (forest.unite(local_of(g_.edge(e).src), local_of(g_.edge(e).dst))) tree_edges.push_back(e);

    std::vector<char> is_forced(g_.edge_count(), 0);
    for (EdgeIndex e : forced) is_forced[e] = 1;
    prune(tree_edges, is_forced);

    Tree tree;
    std::sort(tree_edges.begin(), tree_edges.end());
    tree.edges = std::move(tree_edges);
    for (EdgeIndex e : tree.edges) tree.weight += weight(e);
    std::vector<std::size_t> degree(n, 0);
    for (EdgeIndex e : tree.edges) {
      ++degree[index(g_.edge(e).src)];
      ++degree[index(g_.edge(e).dst)];
    }
    for (std::size_t v = 0; v < n; ++v)
      if (degree[v] == 1 && !is_peer_[v]) tree.minimal = false;
    return tree;
  }

  template <typename Adj>
  std::optional<std::vector<EdgeIndex>> dreyfus_wagner(const Adj& adj, const std::vector<std::size_t>& terminals) const {
    const std::size_t n = adj.size();
    const std::size_t k = terminals.size();
    const std::size_t full = (std::size_t{1} << k) - 1;
    enum class Kind : std::uint8_t { kNone, kLeaf, kMerge, kEdge };
    struct Back {
      Kind kind = Kind::kNone;
      std::size_t a = 0;  // merge: sub-mask; edge: previous node
      EdgeIndex edge = 0;
    };
    std::vector<double> dp((full + 1) * n, kInf);
    std::vector<Back> back((full + 1) * n);
    auto at = [n](std::size_t mask, std::size_t v) { return mask * n + v; };

    for (std::size_t i = 0; i < k; ++i) {
      dp[at(std::size_t{1} << i, terminals[i])] = 0.0;
      back[at(std::size_t{1} << i, terminals[i])].kind = Kind::kLeaf;
    }
    using Item = std::pair<double, std::size_t>;
    for (std::size_t mask = 1; mask <= full; ++mask) {
      const std::size_t low = mask & (~mask + 1);
      if (mask != low) {
        for (std::size_t v = 0; v < n; ++v) {
          for (std::size_t sub = (mask - 1) & mask; sub > 0; sub = (sub - 1) & mask) {
            if (!(sub & low)) continue;
            const double cost = dp[at(sub, v)] + dp[at(mask ^ sub, v)];
            if (cost < dp[at(mask, v)]) {
              dp[at(mask, v)] = cost;
              back[at(mask, v)] = Back{Kind::kMerge, sub, 0};
            }
          }
        }
      }
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      for (std::size_t v = 0; v < n; ++v)
        if (dp[at(mask, v)] < kInf) heap.push({dp[at(mask, v)], v});
      while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dp[at(mask, u)]) continue;
        for (const auto& arc : adj[u]) {
          const double nd = d + weight(arc.edge);
          if (nd < dp[at(mask, arc.to)]) {
            dp[at(mask, arc.to)] = nd;
            back[at(mask, arc.to)] = Back{Kind::kEdge, u, arc.edge};
            heap.push({nd, arc.to});
          }
        }
      }
    }
    if (dp[at(full, terminals.front())] == kInf) return std::nullopt;

    std::vector<EdgeIndex> edges;
    std::vector<std::pair<std::size_t, std::size_t>> todo{{full, terminals.front()}};
    while (!todo.empty()) {
      const auto [mask, v] = todo.back();
      todo.pop_back();
      const Back& b = back[at(mask, v)];
      if (b.kind == Kind::kMerge) {
        todo.push_back({b.a, v});
        todo.push_back({mask ^ b.a, v});
      } else if (b.kind == Kind::kEdge) {
        edges.push_back(b.edge);
        todo.push_back({mask, b.a});
      }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
  }

  void prune(std::vector<EdgeIndex>& edges, const std::vector<char>& is_forced) const {
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::size_t> degree(g_.node_count(), 0);
      for (EdgeIndex e : edges) {
        ++degree[index(g_.edge(e).src)];
        ++degree[index(g_.edge(e).dst)];
      }
      auto dangling = [&](EdgeIndex e) {
        if (is_forced[e]) return false;
        const std::size_t a = index(g_.edge(e).src);
        const std::size_t b = index(g_.edge(e).dst);
        return (degree[a] == 1 && !is_peer_[a]) || (degree[b] == 1 && !is_peer_[b]);
      };
      const auto before = edges.size();
      edges.erase(std::remove_if(edges.begin(), edges.end(), dangling), edges.end());
      changed = edges.size() != before;
    }
  }

  // Non-forced edges of `tree`, each touching the component grown so far
  // from peers_.front() through the forced edges, so that forced + any prefix
  // stays connected.
  std::vector<EdgeIndex> branch_order(const Tree& tree, const std::vector<EdgeIndex>& forced) const {
    std::vector<char> in_comp(g_.node_count(), 0);
    in_comp[index(peers_.front())] = 1;
    auto touches = [&](EdgeIndex e) { return in_comp[index(g_.edge(e).src)] || in_comp[index(g_.edge(e).dst)]; };
    auto absorb = [&](EdgeIndex e) { in_comp[index(g_.edge(e).src)] = in_comp[index(g_.edge(e).dst)] = 1; };
    for (bool grew = true; grew;) {
      grew = false;
      for (EdgeIndex e : forced)
        if (touches(e) && !(in_comp[index(g_.edge(e).src)] && in_comp[index(g_.edge(e).dst)])) {
          absorb(e);
          grew = true;
        }
    }
    std::vector<EdgeIndex> pending;
    for (EdgeIndex e : tree.edges)
      if (std::find(forced.begin(), forced.end(), e) == forced.end()) pending.push_back(e);
    std::vector<EdgeIndex> order;
    while (!pending.empty()) {
      auto it = std::find_if(pending.begin(), pending.end(), touches);
      absorb(*it);
      order.push_back(*it);
      pending.erase(it);
    }
    return order;
  }

  SteinerTree to_steiner(const Tree& tree) const {
    SteinerTree out;
    std::vector<CatalystId> cats;
    for (EdgeIndex e : tree.edges) {
      const EdgeChoice c = mg_.choice(e);
      out.choices.push_back(c);
      cats.push_back(c.catalyst);
    }
    std::sort(out.choices.begin(), out.choices.end(), [](const EdgeChoice& a, const EdgeChoice& b) {
      return a.edge != b.edge ? a.edge < b.edge : a.catalyst < b.catalyst;
    });
    for (const auto& c : out.choices) out.weight += c.weight;
    out.catalysts = CatalystSet(std::move(cats));
    return out;
  }

 private:
  const Multigraph& mg_;
  const UncertainGraph& g_;
  std::vector<NodeId> peers_;
  std::vector<char> is_peer_;
};

struct Subproblem {
  std::vector<EdgeIndex> forced;
  std::vector<EdgeIndex> excluded;
  Tree tree;
};

struct SubproblemAfter {
  bool operator()(const Subproblem& a, const Subproblem& b) const {
    if (a.tree.weight != b.tree.weight) return a.tree.weight > b.tree.weight;
    return a.tree.edges > b.tree.edges;
  }
};

std::vector<std::pair<EdgeIndex, CatalystId>> choice_key(const SteinerTree& t) {
  std::vector<std::pair<EdgeIndex, CatalystId>> key;
  for (const auto& c : t.choices) key.emplace_back(c.edge, c.catalyst);
  return key;
}

}  // namespace

std::vector<SteinerTree> top_r_steiner_trees(const Multigraph& mg, std::span<const NodeId> q, std::size_t r) {
  std::vector<NodeId> peers(q.begin(), q.end());
  for (NodeId v : peers) mg.graph.require_node(v);
  std::sort(peers.begin(), peers.end());
  peers.erase(std::unique(peers.begin(), peers.end()), peers.end());
  if (peers.size() < 2) throw PreconditionError("Steiner trees need at least two distinct query nodes");
  if (peers.size() > kMaxSteinerTerminals)
    throw GuardError("Steiner tree enumeration refused: " + std::to_string(peers.size()) + " terminals exceed " +
                     std::to_string(kMaxSteinerTerminals));
  if (r == 0) throw PreconditionError("r must be at least 1");

  SteinerSolver solver(mg, peers);
  std::priority_queue<Subproblem, std::vector<Subproblem>, SubproblemAfter> open;
  if (auto tree = solver.solve({}, {})) open.push({{}, {}, std::move(*tree)});

  std::vector<Tree> found;
  double rth_weight = kInf;
  std::size_t expansions = 0;
  while (!open.empty() && expansions < kMaxExpansions) {
    if (found.size() >= r && open.top().tree.weight > rth_weight + kWeightTieTolerance) break;
    Subproblem sub = open.top();
    open.pop();
    ++expansions;
    if (sub.tree.minimal) {
      found.push_back(sub.tree);
      if (found.size() == r) rth_weight = sub.tree.weight;
    }
    const auto order = solver.branch_order(sub.tree, sub.forced);
    std::vector<EdgeIndex> forced = sub.forced;
    for (EdgeIndex e : order) {
      std::vector<EdgeIndex> excluded = sub.excluded;
      excluded.push_back(e);
      if (auto tree = solver.solve(forced, excluded)) open.push({forced, std::move(excluded), std::move(*tree)});
      forced.push_back(e);
    }
  }

  std::vector<SteinerTree> trees;
  for (const auto& t : found) trees.push_back(solver.to_steiner(t));
  std::stable_sort(trees.begin(), trees.end(),
                   [](const SteinerTree& a, const SteinerTree& b) { return a.weight < b.weight; });
  for (std::size_t i = 0; i < trees.size();) {
    std::size_t j = i + 1;
    while (j < trees.size() && trees[j].weight - trees[i].weight <= kWeightTieTolerance) ++j;
    std::stable_sort(trees.begin() + static_cast<std::ptrdiff_t>(i), trees.begin() + static_cast<std::ptrdiff_t>(j),
                     [](const SteinerTree& a, const SteinerTree& b) { return choice_key(a) < choice_key(b); });
    i = j;
  }
  if (trees.size() > r) trees.resize(r);
  return trees;
}

InducedSubgraph induced_subgraph(const UncertainGraph& graph, std::span<const SteinerTree> trees) {
  std::vector<EdgeChoice> all;
  for (const auto& t : trees) all.insert(all.end(), t.choices.begin(), t.choices.end());
  return induced_subgraph(graph, std::span<const EdgeChoice>(all));
}

}  // namespace catrel
