#include "catrel/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <thread>
#include <vector>

namespace catrel {

std::size_t positive_edge_count(const UncertainGraph& graph, const CatalystSet& cats) {
  std::size_t n = 0;
  for (const auto& rec : graph.edges())
    if (!rec.is_self_loop() && edge_probability(rec, cats) > 0.0) ++n;
  return n;
}

namespace {

constexpr std::size_t kMaxSupportedEdges = 31;
constexpr std::size_t kHighBits = 6;

// Positive-probability edges relabelled onto at most 64 local nodes so a
// world is a 32-bit edge mask and a reached set is a 64-bit node mask.
struct CompactGraph {
  std::vector<double> prob;
  std::vector<std::uint8_t> src, dst;
  std::vector<std::uint32_t> out_mask;  // per local node, edges leaving it
  std::vector<std::uint32_t> inc_mask;  // per local node, edges touching it
  std::vector<int> local_of;            // original node -> local id or -1

  int local(NodeId v) const { return local_of[index(v)]; }
};

CompactGraph compact(const UncertainGraph& graph, const CatalystSet& cats, std::size_t max_edges) {
  if (max_edges > kMaxSupportedEdges)
    throw PreconditionError("oracle edge guard cannot exceed " + std::to_string(kMaxSupportedEdges));
  if (const std::size_t found = positive_edge_count(graph, cats); found > max_edges)
    throw GuardError("exact enumeration refused: " + std::to_string(found) +
                     " positive-probability edges exceed the guard of " + std::to_string(max_edges));
  CompactGraph cg;
  cg.local_of.assign(graph.node_count(), -1);
  int next = 0;
  auto local_id = [&](NodeId v) {
    int& id = cg.local_of[index(v)];
    if (id < 0) id = next++;
    return static_cast<std::uint8_t>(id);
  };
  for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
    const auto& rec = graph.edge(e);
    if (rec.is_self_loop()) continue;
    const double p = edge_probability(rec, cats);
    if (p <= 0.0) continue;
    cg.prob.push_back(p);
    cg.src.push_back(local_id(rec.src));
    cg.dst.push_back(local_id(rec.dst));
  }
  cg.out_mask.assign(next, 0);
  cg.inc_mask.assign(next, 0);
  for (std::size_t i = 0; i < cg.prob.size(); ++i) {
    cg.out_mask[cg.src[i]] |= 1u << i;
    cg.inc_mask[cg.src[i]] |= 1u << i;
    cg.inc_mask[cg.dst[i]] |= 1u << i;
  }
  return cg;
}

// Probability of every assignment of edges [first, first + count).
std::vector<double> assignment_table(const CompactGraph& cg, std::size_t first, std::size_t count) {
  std::vector<double> table{1.0};
  table.reserve(std::size_t{1} << count);
  for (std::size_t i = 0; i < count; ++i) {
    const double p = cg.prob[first + i];
    const std::size_t half = table.size();
    table.resize(half * 2);
    for (std::size_t x = 0; x < half; ++x) {
      table[x | half] = table[x] * p;
      table[x] *= 1.0 - p;
    }
  }
  return table;
}

// Sums the probability of every world accepted by `accepts`. Worlds are split
// into chunks by their high-order bits; each chunk walks its low bits in
// Gray-code order and the chunk sums are added in chunk order, so the result
// does not depend on how chunks are spread over workers.
template <typename Accepts>
ExactResult enumerate_worlds(const CompactGraph& cg, unsigned workers, Accepts accepts) {
  const std::size_t m = cg.prob.size();
  const std::size_t high = std::min(m, kHighBits);
  const std::size_t low = m - high;
  const std::vector<double> low_prob = assignment_table(cg, 0, low);
  const std::vector<double> high_prob = assignment_table(cg, low, high);
  std::vector<double> chunk_sum(high_prob.size(), 0.0);

  auto run_chunk = [&](std::size_t chunk) {
    double sum = 0.0;
    const std::uint32_t base = static_cast<std::uint32_t>(chunk) << low;
    for (std::uint32_t i = 0; i < low_prob.size(); ++i) {
      const std::uint32_t gray = i ^ (i >> 1);
      if (accepts(base | gray)) sum += high_prob[chunk] * low_prob[gray];
    }
    chunk_sum[chunk] = sum;
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(chunk_sum.size())));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunk_sum.size(); ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunk_sum.size(); c += workers) run_chunk(c);
      });
  }

  double total = 0.0;
  for (double s : chunk_sum) total += s;
  return ExactResult{std::clamp(total, 0.0, 1.0), std::uint64_t{1} << m};
}

bool reaches(const CompactGraph& cg, std::uint32_t world, int s, int t) {
  std::uint64_t reached = std::uint64_t{1} << s;
  std::uint8_t stack[64];
  int top = 0;
  stack[top++] = static_cast<std::uint8_t>(s);
  while (top > 0) {
    const int u = stack[--top];
    std::uint32_t em = cg.out_mask[u] & world;
    while (em) {
      const int e = std::countr_zero(em);
      em &= em - 1;
      const int v = cg.dst[e];
      if (reached >> v & 1) continue;
      if (v == t) return true;
      reached |= std::uint64_t{1} << v;
      stack[top++] = static_cast<std::uint8_t>(v);
    }
  }
  return false;
}

bool spans(const CompactGraph& cg, std::uint32_t world, int start, std::uint64_t want) {
  std::uint64_t reached = std::uint64_t{1} << start;
  std::uint8_t stack[64];
  int top = 0;
  stack[top++] = static_cast<std::uint8_t>(start);
  while (top > 0) {
    const int u = stack[--top];
    std::uint32_t em = cg.inc_mask[u] & world;
    while (em) {
      const int e = std::countr_zero(em);
      em &= em - 1;
      const int v = cg.src[e] ^ cg.dst[e] ^ u;
      if (reached >> v & 1) continue;
      reached |= std::uint64_t{1} << v;
      if ((reached & want) == want) return true;
      stack[top++] = static_cast<std::uint8_t>(v);
    }
  }
  return (reached & want) == want;
}

}  // namespace

ExactResult exact_reliability(const UncertainGraph& graph, NodeId s, NodeId t, const CatalystSet& cats,
                              const OracleOptions& options) {
  graph.require_node(s);
  graph.require_node(t);
  if (s == t) return ExactResult{1.0, 0};
  const CompactGraph cg = compact(graph, cats, options.max_edges);
  const int ls = cg.local(s);
  const int lt = cg.local(t);
  if (ls < 0 || lt < 0) return ExactResult{0.0, std::uint64_t{1} << cg.prob.size()};
  return enumerate_worlds(cg, options.workers, [&](std::uint32_t world) { return reaches(cg, world, ls, lt); });
}

ExactResult exact_connectivity(const UncertainGraph& graph, std::span<const NodeId> q, const CatalystSet& cats,
                               const OracleOptions& options) {
  std::vector<NodeId> peers(q.begin(), q.end());
  std::sort(peers.begin(), peers.end());
  peers.erase(std::unique(peers.begin(), peers.end()), peers.end());
  if (peers.size() < 2) throw PreconditionError("connectivity needs at least two distinct query nodes");
  for (NodeId v : peers) graph.require_node(v);

  const CompactGraph cg = compact(graph, cats, options.max_edges);
  std::uint64_t want = 0;
  for (NodeId v : peers) {
    const int lv = cg.local(v);
    if (lv < 0) return ExactResult{0.0, std::uint64_t{1} << cg.prob.size()};
    want |= std::uint64_t{1} << lv;
  }
  const int start = cg.local(peers.front());
  return enumerate_worlds(cg, options.workers, [&](std::uint32_t world) { return spans(cg, world, start, want); });
}

TopkResult exhaustive_topk(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k,
                           const OracleOptions& options, std::uint64_t max_subsets) {
  const std::size_t n = graph.catalyst_count();
  if (k > n) throw PreconditionError("k exceeds the number of catalysts");
  // C(n, k) with early exit once the guard is passed.
  std::uint64_t subsets = 1;
  for (std::size_t i = 0; i < k; ++i) {
    subsets = subsets * (n - i) / (i + 1);
    if (subsets > max_subsets)
      throw GuardError("exhaustive top-k refused: more than " + std::to_string(max_subsets) + " subsets");
  }

  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  TopkResult best;
  bool have = false;
  while (true) {
    CatalystSet cats;
    for (std::size_t i : pick) cats.insert(catalyst(i));
    const double value = exact_reliability(graph, s, t, cats, options).value;
    if (!have || value > best.reliability + 1e-12) {
      best = TopkResult{cats, value};
      have = true;
    }
    // Next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace catrel
