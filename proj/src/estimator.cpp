#include "catrel/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "catrel/rng.hpp"

namespace catrel {
namespace {

// Trial-local scratch. Stamps avoid clearing the visited set and the coin
// cache between trials.
class TrialState {
 public:
  TrialState(std::size_t nodes, std::size_t edges)
      : visit_(nodes, 0), coin_stamp_(edges, 0), coin_(edges, 0) {
    queue_.reserve(nodes);
  }

  void begin() {
    ++stamp_;
    queue_.clear();
    head_ = 0;
  }

  bool visited(NodeId v) const { return visit_[index(v)] == stamp_; }
  void visit(NodeId v) {
    visit_[index(v)] = stamp_;
    queue_.push_back(v);
  }
  bool pending() const { return head_ < queue_.size(); }
  NodeId pop() { return queue_[head_++]; }

  bool coin(EdgeIndex e, double p, SplitMix64& rng) {
    if (coin_stamp_[e] != stamp_) {
      coin_stamp_[e] = stamp_;
      coin_[e] = rng.bernoulli(p) ? 1 : 0;
    }
    return coin_[e] != 0;
  }

 private:
  std::vector<std::uint32_t> visit_;
  std::vector<std::uint32_t> coin_stamp_;
  std::vector<std::uint8_t> coin_;
  std::vector<NodeId> queue_;
  std::size_t head_ = 0;
  std::uint32_t stamp_ = 0;
};

// Counts successful trials; trial i always uses the stream derived from i.
template <typename Trial>
std::size_t run_trials(const UncertainGraph& graph, const SamplerConfig& cfg, Trial trial) {
  const std::size_t k = cfg.samples;
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.parallelism, static_cast<unsigned>(k)));
  auto block = [&](std::size_t first, std::size_t last) {
    TrialState state(graph.node_count(), graph.edge_count());
    std::size_t hits = 0;
    for (std::size_t i = first; i < last; ++i) {
      SplitMix64 rng(derive_seed(cfg.seed, {i}));
      state.begin();
      if (trial(state, rng)) ++hits;
    }
    return hits;
  };
  if (workers == 1) return block(0, k);

  std::vector<std::size_t> hits(workers, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t first = k * w / workers;
      const std::size_t last = k * (w + 1) / workers;
      pool.emplace_back([&, w, first, last] { hits[w] = block(first, last); });
    }
  }
  std::size_t total = 0;
  for (std::size_t h : hits) total += h;
  return total;
}

ReliabilityEstimate make_estimate(std::size_t successes, const SamplerConfig& cfg) {
  return ReliabilityEstimate{static_cast<double>(successes) / static_cast<double>(cfg.samples), cfg.samples,
                             successes, cfg.seed};
}

}  // namespace

double ReliabilityEstimate::hoeffding_halfwidth(double delta) const {
  if (samples == 0) return 1.0;
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(samples)));
}

ReliabilityEstimate mc_reliability(const UncertainGraph& graph, std::span<const NodeId> sources, NodeId t,
                                   const CatalystSet& cats, const SamplerConfig& cfg) {
  if (cfg.samples == 0) throw PreconditionError("sample count must be positive");
  graph.require_node(t);
  for (NodeId s : sources) graph.require_node(s);
  if (std::find(sources.begin(), sources.end(), t) != sources.end()) return make_estimate(cfg.samples, cfg);
  if (sources.empty() || cats.empty()) return make_estimate(0, cfg);

  const std::vector<double> prob = edge_probabilities(graph, cats);
  const std::size_t hits = run_trials(graph, cfg, [&](TrialState& state, SplitMix64& rng) {
    for (NodeId s : sources)
      if (!state.visited(s)) state.visit(s);
    while (state.pending()) {
      const NodeId u = state.pop();
      for (EdgeIndex e : graph.out_edges(u)) {
        const NodeId v = graph.edge(e).dst;
        if (prob[e] <= 0.0 || state.visited(v)) continue;
        if (!state.coin(e, prob[e], rng)) continue;
        if (v == t) return true;
        state.visit(v);
      }
    }
    return false;
  });
  return make_estimate(hits, cfg);
}

ReliabilityEstimate mc_connectivity(const UncertainGraph& graph, std::span<const NodeId> q, const CatalystSet& cats,
                                    const SamplerConfig& cfg) {
  if (cfg.samples == 0) throw PreconditionError("sample count must be positive");
  std::vector<NodeId> peers(q.begin(), q.end());
  std::sort(peers.begin(), peers.end());
  peers.erase(std::unique(peers.begin(), peers.end()), peers.end());
  if (peers.size() < 2) throw PreconditionError("connectivity needs at least two distinct query nodes");
  for (NodeId v : peers) graph.require_node(v);
  if (cats.empty()) return make_estimate(0, cfg);

  std::vector<char> is_peer(graph.node_count(), 0);
  for (NodeId v : peers) is_peer[index(v)] = 1;
  const std::vector<double> prob = edge_probabilities(graph, cats);

  const std::size_t hits = run_trials(graph, cfg, [&](TrialState& state, SplitMix64& rng) {
    std::size_t remaining = peers.size() - 1;
    state.visit(peers.front());
    auto step = [&](EdgeIndex e, NodeId v) {
      if (prob[e] <= 0.0 || state.visited(v)) return false;
      if (!state.coin(e, prob[e], rng)) return false;
      state.visit(v);
      return is_peer[index(v)] && --remaining == 0;
    };
    while (state.pending()) {
      const NodeId u = state.pop();
      for (EdgeIndex e : graph.out_edges(u))
        if (step(e, graph.edge(e).dst)) return true;
      for (EdgeIndex e : graph.in_edges(u))
        if (step(e, graph.edge(e).src)) return true;
    }
    return false;
  });
  return make_estimate(hits, cfg);
}

std::size_t required_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0,1)");
  return static_cast<std::size_t>(std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon)));
}

}  // namespace catrel
