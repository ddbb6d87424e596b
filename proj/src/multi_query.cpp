#include "catrel/multi_query.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "seeds.hpp"

namespace catrel {
namespace {

using namespace detail;

std::vector<NodeId> sorted_unique(std::span<const NodeId> nodes) {
  std::vector<NodeId> out(nodes.begin(), nodes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void check_query(const UncertainGraph& graph, const AggregateQuery& query) {
  if (query.sources.empty() || query.targets.empty()) throw PreconditionError("sources and targets must be nonempty");
  if (query.r == 0) throw PreconditionError("r must be at least 1");
  for (NodeId v : query.sources) graph.require_node(v);
  for (NodeId v : query.targets) graph.require_node(v);
}

struct PooledPath {
  std::size_t pair;
  const RelPath* path;
};

std::vector<std::vector<RelPath>> paths_per_pair(const UncertainGraph& graph, const std::vector<NodePair>& pairs,
                                                 std::size_t r) {
  const Multigraph mg = build_multigraph(graph);
  std::vector<std::vector<RelPath>> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(top_r_paths(mg, p.source, p.target, r));
  return out;
}

// Reliability of `pair` on the subgraph induced by the selected pooled paths.
double induced_pair_value(const InducedSubgraph& sub, const NodePair& pair, const SamplerConfig& cfg) {
  if (pair.source == pair.target) return 1.0;
  const auto ls = sub.local(pair.source);
  const auto lt = sub.local(pair.target);
  if (!ls || !lt) return 0.0;
  return evaluate_reliability(sub.graph, *ls, *lt, sub.catalysts(), cfg).value;
}

InducedSubgraph induce(const UncertainGraph& graph, const std::vector<PooledPath>& pool,
                       const std::vector<std::size_t>& selected) {
  std::vector<EdgeChoice> choices;
  for (std::size_t i : selected) {
    const auto& c = pool[i].path->choices;
    choices.insert(choices.end(), c.begin(), c.end());
  }
  return induced_subgraph(graph, std::span<const EdgeChoice>(choices));
}

// Per-pair evaluation of the final catalyst set on the full graph.
std::vector<Evaluation> evaluate_pairs(const UncertainGraph& graph, const std::vector<NodePair>& pairs,
                                       const CatalystSet& cats, const SamplerConfig& cfg) {
  std::vector<Evaluation> out;
  for (std::size_t j = 0; j < pairs.size(); ++j)
    out.push_back(evaluate_reliability(graph, pairs[j].source, pairs[j].target, cats, achieved_cfg(cfg, j)));
  return out;
}

void record_pairs(SelectionResult& result, const std::vector<Evaluation>& evals, Aggregate aggregate) {
  Evaluation combined;
  combined.exact = true;
  double sum = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& e : evals) {
    result.pair_values.push_back(e.value);
    result.pair_connected.push_back(e.value > 0.0);
    combined.exact = combined.exact && e.exact;
    combined.samples = std::max(combined.samples, e.samples);
    sum += e.value;
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
  }
  if (evals.empty()) {
    combined.value = 0.0;
  } else if (aggregate == Aggregate::Avg) {
    combined.value = sum / static_cast<double>(evals.size());
  } else {
    combined.value = aggregate == Aggregate::Min ? lo : hi;
  }
  result.achieved = combined;
}

std::vector<CatalystId> unselected_occurrences(const std::vector<PooledPath>& pool, const std::vector<char>& chosen) {
  std::vector<CatalystId> occurrences;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (!chosen[i])
      for (const auto& c : pool[i].path->choices) occurrences.push_back(c.catalyst);
  return occurrences;
}

bool pair_covered(const std::vector<RelPath>& paths, const CatalystSet& cats) {
  return std::any_of(paths.begin(), paths.end(), [&](const RelPath& p) { return p.catalysts.is_subset_of(cats); });
}

}  // namespace

std::vector<NodePair> query_pairs(std::span<const NodeId> sources, std::span<const NodeId> targets) {
  std::vector<NodePair> pairs;
  for (NodeId s : sorted_unique(sources))
    for (NodeId t : sorted_unique(targets)) pairs.push_back({s, t});
  return pairs;
}

SelectionResult topk_max(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg) {
  check_query(graph, query);
  const auto sources = sorted_unique(query.sources);
  const auto targets = sorted_unique(query.targets);
  std::vector<NodeId> s_only;
  std::vector<NodeId> t_only;
  std::set_difference(sources.begin(), sources.end(), targets.begin(), targets.end(), std::back_inserter(s_only));
  std::set_difference(targets.begin(), targets.end(), sources.begin(), sources.end(), std::back_inserter(t_only));
  if (s_only.empty() || t_only.empty())
    throw PreconditionError("removing nodes shared by sources and targets leaves no pair");

  const auto pairs = query_pairs(s_only, t_only);
  SelectionResult best;
  std::vector<double> values;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    SelectionResult r = rel_path(graph, pairs[j].source, pairs[j].target, query.k, query.r, cfg);
    values.push_back(r.achieved.value);
    if (j == 0 || r.achieved.value > best.achieved.value) best = std::move(r);
  }
  best.trace.clear();
  for (std::size_t j = 0; j < values.size(); ++j) {
    best.trace.push_back({j, values[j], 0.0});
    best.pair_values.push_back(values[j]);
    best.pair_connected.push_back(values[j] > 0.0);
  }
  return best;
}

SelectionResult topk_avg(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg) {
  check_query(graph, query);
  const auto pairs = query_pairs(query.sources, query.targets);
  const auto per_pair = paths_per_pair(graph, pairs, query.r);

  std::vector<PooledPath> pool;
  std::vector<CatalystSet> item_catalysts;
  for (std::size_t j = 0; j < pairs.size(); ++j)
    for (const auto& p : per_pair[j])
      if (!p.choices.empty()) {
        pool.push_back({j, &p});
        item_catalysts.push_back(p.catalysts);
      }

  const PathInclusion inclusion =
      greedy_inclusion(std::span<const CatalystSet>(item_catalysts), query.k, [&](const std::vector<std::size_t>& trial) {
        const auto sub = induce(graph, pool, trial);
        double sum = 0.0;
        for (std::size_t j = 0; j < pairs.size(); ++j)
          sum += induced_pair_value(sub, pairs[j], inclusion_cfg(cfg, trial.size(), trial.back(), j));
        return sum / static_cast<double>(pairs.size());
      });

  SelectionResult result;
  result.catalysts = inclusion.catalysts;
  result.trace = inclusion.trace;
  std::vector<char> chosen(pool.size(), 0);
  for (std::size_t i : inclusion.selected) {
    chosen[i] = 1;
    result.paths_used.push_back(*pool[i].path);
  }
  fill_by_frequency(result.catalysts, query.k, unselected_occurrences(pool, chosen));
  record_pairs(result, evaluate_pairs(graph, pairs, result.catalysts, cfg), Aggregate::Avg);
  return result;
}

CatalystCover min_catalyst_set(std::span<const std::vector<RelPath>> pair_paths, std::size_t k) {
  CatalystCover cover;
  cover.connected.assign(pair_paths.size(), false);
  std::vector<bool> open(pair_paths.size());
  for (std::size_t j = 0; j < pair_paths.size(); ++j) open[j] = !pair_paths[j].empty();

  while (true) {
    const RelPath* best = nullptr;
    std::size_t best_pair = 0;
    std::size_t best_cost = 0;
    for (std::size_t j = 0; j < pair_paths.size(); ++j) {
      if (!open[j]) continue;
      for (const auto& p : pair_paths[j]) {
        const std::size_t cost = cover.catalysts.count_new(p.catalysts);
        if (!best || cost < best_cost || (cost == best_cost && p.reliability > best->reliability)) {
          best = &p;
          best_pair = j;
          best_cost = cost;
        }
      }
    }
    if (!best) break;
    for (CatalystId c : best->catalysts)
      if (!cover.catalysts.contains(c)) cover.order.push_back(c);
    cover.catalysts.merge(best->catalysts);
    cover.connected[best_pair] = true;
    open[best_pair] = false;
  }

  if (cover.catalysts.size() > k) {
    const std::vector<CatalystId> order = cover.order;
    for (auto it = order.rbegin(); it != order.rend() && cover.catalysts.size() > k; ++it) {
      CatalystSet trial = cover.catalysts;
      trial.erase(*it);
      bool keeps_all = true;
      for (std::size_t j = 0; j < pair_paths.size() && keeps_all; ++j)
        if (cover.connected[j] && !pair_covered(pair_paths[j], trial)) keeps_all = false;
      if (keeps_all) {
        cover.catalysts = std::move(trial);
        cover.order.erase(std::find(cover.order.begin(), cover.order.end(), *it));
      }
    }
  }
  cover.over_budget = cover.catalysts.size() > k;
  return cover;
}

SelectionResult topk_min(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg) {
  check_query(graph, query);
  const auto pairs = query_pairs(query.sources, query.targets);
  // With one pair the cover step has nothing to balance.
  if (pairs.size() == 1) return rel_path(graph, pairs[0].source, pairs[0].target, query.k, query.r, cfg);
  const auto per_pair = paths_per_pair(graph, pairs, query.r);

  CatalystCover cover = min_catalyst_set(per_pair, query.k);
  // Over budget: drop the catalyst whose loss disconnects the fewest pairs,
  // latest selected first on ties.
  while (cover.catalysts.size() > query.k) {
    std::size_t best_pos = 0;
    std::size_t best_loss = pairs.size() + 1;
    for (std::size_t pos = cover.order.size(); pos-- > 0;) {
      CatalystSet trial = cover.catalysts;
      trial.erase(cover.order[pos]);
      std::size_t loss = 0;
      for (std::size_t j = 0; j < pairs.size(); ++j)
        if (pair_covered(per_pair[j], cover.catalysts) && !pair_covered(per_pair[j], trial)) ++loss;
      if (loss < best_loss) {
        best_loss = loss;
        best_pos = pos;
      }
    }
    cover.catalysts.erase(cover.order[best_pos]);
    cover.order.erase(cover.order.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }

  std::vector<PooledPath> pool;
  std::vector<std::vector<std::size_t>> pool_of_pair(pairs.size());
  for (std::size_t j = 0; j < pairs.size(); ++j)
    for (const auto& p : per_pair[j]) {
      pool_of_pair[j].push_back(pool.size());
      pool.push_back({j, &p});
    }

  SelectionResult result;
  result.catalysts = cover.catalysts;
  std::vector<char> chosen(pool.size(), 0);
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (pool[i].path->catalysts.is_subset_of(result.catalysts)) {
      chosen[i] = 1;
      selected.push_back(i);
    }

  auto pair_values = [&](const std::vector<std::size_t>& sel) {
    const auto sub = induce(graph, pool, sel);
    std::vector<double> values;
    const std::size_t last = sel.empty() ? pool.size() : sel.back();
    for (std::size_t j = 0; j < pairs.size(); ++j)
      values.push_back(induced_pair_value(sub, pairs[j], inclusion_cfg(cfg, sel.size(), last, j)));
    return values;
  };

  std::vector<double> values = pair_values(selected);
  while (true) {
    std::vector<std::size_t> by_value(pairs.size());
    for (std::size_t j = 0; j < pairs.size(); ++j) by_value[j] = j;
    std::stable_sort(by_value.begin(), by_value.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::optional<std::size_t> pick;
    std::vector<double> pick_values;
    for (std::size_t j : by_value) {
      for (std::size_t i : pool_of_pair[j]) {
        if (chosen[i] || result.catalysts.size() + result.catalysts.count_new(pool[i].path->catalysts) > query.k)
          continue;
        std::vector<std::size_t> trial = selected;
        trial.push_back(i);
        auto trial_values = pair_values(trial);
        if (!pick || trial_values[j] > pick_values[j]) {
          pick = i;
          pick_values = std::move(trial_values);
        }
      }
      if (pick) {
        result.trace.push_back({*pick, pick_values[j], pick_values[j] - values[j]});
        break;
      }
    }
    if (!pick) break;
    chosen[*pick] = 1;
    selected.push_back(*pick);
    result.catalysts.merge(pool[*pick].path->catalysts);
    values = std::move(pick_values);
  }

  for (std::size_t i : selected) result.paths_used.push_back(*pool[i].path);
  fill_by_frequency(result.catalysts, query.k, unselected_occurrences(pool, chosen));
  record_pairs(result, evaluate_pairs(graph, pairs, result.catalysts, cfg), Aggregate::Min);
  return result;
}

SelectionResult run_aggregate(const UncertainGraph& graph, const AggregateQuery& query, const SamplerConfig& cfg) {
  switch (query.aggregate) {
    case Aggregate::Max:
      return topk_max(graph, query, cfg);
    case Aggregate::Avg:
      return topk_avg(graph, query, cfg);
    case Aggregate::Min:
      return topk_min(graph, query, cfg);
  }
  throw PreconditionError("unknown aggregate");
}

SelectionResult connectivity_topk(const UncertainGraph& graph, const ConnectivityQuery& query,
                                  const SamplerConfig& cfg) {
  const auto peers = sorted_unique(query.peers);
  for (NodeId v : peers) graph.require_node(v);
  if (peers.size() < 2) throw PreconditionError("connectivity needs at least two distinct peers");
  const Multigraph mg = build_multigraph(graph);
  const auto trees = top_r_steiner_trees(mg, peers, query.r);

  std::vector<CatalystSet> item_catalysts;
  for (const auto& t : trees) item_catalysts.push_back(t.catalysts);
  const PathInclusion inclusion =
      greedy_inclusion(std::span<const CatalystSet>(item_catalysts), query.k, [&](const std::vector<std::size_t>& trial) {
        std::vector<EdgeChoice> choices;
        for (std::size_t i : trial) choices.insert(choices.end(), trees[i].choices.begin(), trees[i].choices.end());
        const auto sub = induced_subgraph(graph, std::span<const EdgeChoice>(choices));
        std::vector<NodeId> local;
        for (NodeId v : peers) {
          const auto lv = sub.local(v);
          if (!lv) return 0.0;
          local.push_back(*lv);
        }
        const auto seed = derive_seed(cfg.seed, {kTreeTag, trial.size(), trial.back()});
        return evaluate_connectivity(sub.graph, local, sub.catalysts(), with_seed(cfg, seed)).value;
      });

  SelectionResult result;
  result.catalysts = inclusion.catalysts;
  result.trace = inclusion.trace;
  std::vector<char> chosen(trees.size(), 0);
  for (std::size_t i : inclusion.selected) {
    chosen[i] = 1;
    result.trees_used.push_back(trees[i]);
  }
  std::vector<CatalystId> occurrences;
  for (std::size_t i = 0; i < trees.size(); ++i)
    if (!chosen[i])
      for (const auto& c : trees[i].choices) occurrences.push_back(c.catalyst);
  fill_by_frequency(result.catalysts, query.k, occurrences);
  result.achieved = evaluate_connectivity(graph, peers, result.catalysts, achieved_cfg(cfg, 0));
  return result;
}

}  // namespace catrel
