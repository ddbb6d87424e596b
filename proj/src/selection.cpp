#include "catrel/selection.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "catrel/rng.hpp"
#include "seeds.hpp"

namespace catrel {
namespace {

using namespace detail;

Evaluation achieved_on(const UncertainGraph& graph, NodeId s, NodeId t, const CatalystSet& cats,
                       const SamplerConfig& cfg) {
  return evaluate_reliability(graph, s, t, cats, achieved_cfg(cfg, 0));
}

double mc_value(const UncertainGraph& graph, NodeId s, NodeId t, const CatalystSet& cats, const SamplerConfig& cfg) {
  const NodeId sources[] = {s};
  return mc_reliability(graph, sources, t, cats, cfg).value;
}

}  // namespace

void fill_by_frequency(CatalystSet& cats, std::size_t k, std::span<const CatalystId> occurrences) {
  std::map<CatalystId, std::size_t> count;
  for (CatalystId c : occurrences)
    if (!cats.contains(c)) ++count[c];
  std::vector<std::pair<CatalystId, std::size_t>> ranked(count.begin(), count.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [c, n] : ranked) {
    if (cats.size() >= k) break;
    cats.insert(c);
  }
}

SelectionResult individual_topk(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k,
                                const SamplerConfig& cfg) {
  graph.require_node(s);
  graph.require_node(t);
  SelectionResult result;
  std::vector<std::pair<double, CatalystId>> scores;
  for (std::size_t i = 0; i < graph.catalyst_count(); ++i) {
    const CatalystId c = catalyst(i);
    const double value = mc_value(graph, s, t, CatalystSet{c}, with_seed(cfg, derive_seed(cfg.seed, {kIndividualTag, i})));
    scores.emplace_back(value, c);
  }
  std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < std::min(k, scores.size()); ++i) {
    result.catalysts.insert(scores[i].second);
    result.trace.push_back({index(scores[i].second), scores[i].first, scores[i].first});
  }
  result.achieved = achieved_on(graph, s, t, result.catalysts, cfg);
  return result;
}

SelectionResult greedy_topk(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k, const SamplerConfig& cfg,
                            const GreedyOptions& options) {
  graph.require_node(s);
  graph.require_node(t);
  if (options.forced_first && !graph.has_catalyst(*options.forced_first))
    throw PreconditionError("forced first catalyst does not exist");
  SelectionResult result;
  const std::size_t rounds = std::min(k, graph.catalyst_count());
  for (std::size_t round = 0; round < rounds; ++round) {
    const double base =
        result.catalysts.empty()
            ? (s == t ? 1.0 : 0.0)
            : mc_value(graph, s, t, result.catalysts,
                       with_seed(cfg, derive_seed(cfg.seed, {kGreedyTag, round, graph.catalyst_count()})));
    std::optional<CatalystId> best;
    double best_value = 0.0;
    for (std::size_t i = 0; i < graph.catalyst_count(); ++i) {
      const CatalystId c = catalyst(i);
      if (result.catalysts.contains(c)) continue;
      if (round == 0 && options.forced_first && c != *options.forced_first) continue;
      CatalystSet trial = result.catalysts;
      trial.insert(c);
      const double value = mc_value(graph, s, t, trial, with_seed(cfg, derive_seed(cfg.seed, {kGreedyTag, round, i})));
      if (!best || value - base > best_value - base) {
        best = c;
        best_value = value;
      }
    }
    result.catalysts.insert(*best);
    result.trace.push_back({index(*best), best_value, best_value - base});
  }
  result.achieved = achieved_on(graph, s, t, result.catalysts, cfg);
  return result;
}

PathInclusion iterative_path_inclusion(const UncertainGraph& graph, std::span<const RelPath> paths, std::size_t k,
                                       const SamplerConfig& cfg) {
  if (paths.empty()) return {};
  const NodeId s = paths.front().source();
  const NodeId t = paths.front().target();
  for (const auto& p : paths)
    if (p.source() != s || p.target() != t) throw PreconditionError("paths must share source and target");

  std::vector<CatalystSet> item_catalysts;
  for (const auto& p : paths) item_catalysts.push_back(p.catalysts);

  return greedy_inclusion(item_catalysts, k, [&](const std::vector<std::size_t>& trial) {
    std::vector<EdgeChoice> choices;
    for (std::size_t i : trial) choices.insert(choices.end(), paths[i].choices.begin(), paths[i].choices.end());
    const auto sub = induced_subgraph(graph, std::span<const EdgeChoice>(choices));
    const auto ls = sub.local(s);
    const auto lt = sub.local(t);
    if (!ls || !lt) return s == t ? 1.0 : 0.0;
    return evaluate_reliability(sub.graph, *ls, *lt, sub.catalysts(), inclusion_cfg(cfg, trial.size(), trial.back(), 0))
        .value;
  });
}

SelectionResult rel_path(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k, std::size_t r,
                         const SamplerConfig& cfg) {
  if (r == 0) throw PreconditionError("r must be at least 1");
  const Multigraph mg = build_multigraph(graph);
  const std::vector<RelPath> paths = top_r_paths(mg, s, t, r);
  const PathInclusion inclusion = iterative_path_inclusion(graph, paths, k, cfg);

  SelectionResult result;
  result.catalysts = inclusion.catalysts;
  result.trace = inclusion.trace;
  std::vector<char> chosen(paths.size(), 0);
  for (std::size_t i : inclusion.selected) {
    chosen[i] = 1;
    result.paths_used.push_back(paths[i]);
  }
  std::vector<CatalystId> occurrences;
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (!chosen[i])
      for (const auto& c : paths[i].choices) occurrences.push_back(c.catalyst);
  fill_by_frequency(result.catalysts, k, occurrences);
  result.achieved = achieved_on(graph, s, t, result.catalysts, cfg);
  return result;
}

CurvatureReport curvature_report(std::span<const RelPath> paths, std::size_t k) {
  constexpr std::size_t kMaxPaths = 20;
  if (paths.empty()) throw PreconditionError("curvature needs at least one path");
  if (paths.size() > kMaxPaths)
    throw GuardError("curvature report refused: " + std::to_string(paths.size()) + " paths exceed " +
                     std::to_string(kMaxPaths));
  const NodeId s = paths.front().source();
  const NodeId t = paths.front().target();
  std::map<NodeId, std::size_t> owner;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].source() != s || paths[i].target() != t) throw PreconditionError("paths must share source and target");
    for (std::size_t j = 1; j + 1 < paths[i].nodes.size(); ++j) {
      const NodeId v = paths[i].nodes[j];
      auto [it, fresh] = owner.emplace(v, i);
      if (!fresh && it->second != i)
        throw PreconditionError("paths " + std::to_string(it->second) + " and " + std::to_string(i) +
                                " share node " + std::to_string(index(v)));
    }
  }

  // Catalyst sets as bitsets over the catalysts that occur on the paths.
  std::map<CatalystId, std::size_t> local;
  for (const auto& p : paths)
    for (CatalystId c : p.catalysts) local.emplace(c, local.size());
  const std::size_t words = (local.size() + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  std::vector<Bits> bits(paths.size(), Bits(words, 0));
  for (std::size_t i = 0; i < paths.size(); ++i)
    for (CatalystId c : paths[i].catalysts) bits[i][local[c] / 64] |= std::uint64_t{1} << (local[c] % 64);
  auto union_count = [&](const Bits& a, const Bits& b) {
    std::size_t n = 0;
    for (std::size_t w = 0; w < words; ++w) n += static_cast<std::size_t>(std::popcount(a[w] | b[w]));
    return n;
  };

  CurvatureReport report;
  std::size_t min_maximal = paths.size() + 1;
  std::vector<char> in(paths.size(), 0);
  // Depth-first over include/exclude decisions; infeasible unions are pruned
  // because every superset is infeasible too.
  auto visit = [&](auto&& self, std::size_t i, const Bits& acc, std::size_t size) -> void {
    if (i == paths.size()) {
      report.max_feasible = std::max(report.max_feasible, size);
      for (std::size_t j = 0; j < paths.size(); ++j)
        if (!in[j] && union_count(acc, bits[j]) <= k) return;
      min_maximal = std::min(min_maximal, size);
      return;
    }
    if (union_count(acc, bits[i]) <= k) {
      Bits next = acc;
      for (std::size_t w = 0; w < words; ++w) next[w] |= bits[i][w];
      in[i] = 1;
      self(self, i + 1, next, size + 1);
      in[i] = 0;
    }
    self(self, i + 1, acc, size);
  };
  visit(visit, 0, Bits(words, 0), 0);
  report.min_maximal = min_maximal > paths.size() ? 0 : min_maximal;

  // Node-disjoint paths fail independently, so the induced reliability of any
  // subset is 1 - prod(1 - rel).
  auto rel_without = [&](std::optional<std::size_t> skip) {
    double fail = 1.0;
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (i != skip) fail *= 1.0 - paths[i].reliability;
    return 1.0 - fail;
  };
  const double rel_all = rel_without(std::nullopt);
  double min_ratio = 1.0;
  for (std::size_t i = 0; i < paths.size(); ++i)
    min_ratio = std::min(min_ratio, (rel_all - rel_without(i)) / paths[i].reliability);
  report.curvature = std::clamp(1.0 - min_ratio, 0.0, 1.0);

  if (report.max_feasible == 0) {
    report.bound = 0.0;
  } else {
    const double kc = static_cast<double>(report.max_feasible);
    const double kmin = static_cast<double>(report.min_maximal);
    report.bound = report.curvature < 1e-12
                       ? kmin / kc
                       : (1.0 - std::pow((kc - report.curvature) / kc, kmin)) / report.curvature;
    report.bound = std::clamp(report.bound, 0.0, 1.0);
  }
  return report;
}

}  // namespace catrel
