#pragma once

// Single source-target catalyst selection: the Individual top-k and Greedy
// baselines, and Rel-Path (top-r most reliable paths followed by iterative
// path inclusion under a catalyst budget).

#include <optional>
#include <span>
#include <vector>

#include "catrel/estimator.hpp"
#include "catrel/evaluate.hpp"
#include "catrel/paths.hpp"
#include "catrel/steiner.hpp"

namespace catrel {

/// One step of a selection run. `item` is a catalyst id, a path index, a tree
/// index or a pair index depending on the algorithm.
struct TraceStep {
  std::size_t item = 0;
  double value = 0.0;  // objective after the step
  double gain = 0.0;   // marginal gain of the step
};

struct SelectionResult {
  CatalystSet catalysts;
  Evaluation achieved;  // recomputed on the full graph with `catalysts`
  std::vector<RelPath> paths_used;
  std::vector<SteinerTree> trees_used;
  std::vector<TraceStep> trace;
  // Multi-pair algorithms: value and connectedness per (source, target) pair,
  // sources major.
  std::vector<double> pair_values;
  std::vector<bool> pair_connected;
};

SelectionResult individual_topk(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k,
                                const SamplerConfig& cfg);

struct GreedyOptions {
  /// Test hook: take this catalyst in the first round instead of the argmax.
  std::optional<CatalystId> forced_first;
};

SelectionResult greedy_topk(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k, const SamplerConfig& cfg,
                            const GreedyOptions& options = {});

struct PathInclusion {
  std::vector<std::size_t> selected;  // indices into the input path list, in selection order
  CatalystSet catalysts;
  std::vector<TraceStep> trace;
};

/// Greedy path inclusion: repeatedly adds the path whose inclusion gives the
/// most reliable induced subgraph while the catalyst union stays within k.
/// Ties keep the earlier path. Reliability of the induced subgraph is exact
/// within the oracle guard, Monte Carlo beyond it.
PathInclusion iterative_path_inclusion(const UncertainGraph& graph, std::span<const RelPath> paths, std::size_t k,
                                       const SamplerConfig& cfg);

SelectionResult rel_path(const UncertainGraph& graph, NodeId s, NodeId t, std::size_t k, std::size_t r,
                         const SamplerConfig& cfg);

struct CurvatureReport {
  std::size_t max_feasible = 0;      // K_C
  std::size_t min_maximal = 0;       // k_C
  double curvature = 0.0;            // k_Rel
  double bound = 0.0;                // approximation factor
};

/// Approximation diagnostics for node-disjoint path sets (disjoint except at
/// the shared endpoints). Throws PreconditionError naming a shared node when
/// the paths overlap, GuardError beyond 20 paths.
CurvatureReport curvature_report(std::span<const RelPath> paths, std::size_t k);

// Building blocks shared with the multi-query algorithms.

/// Adds catalysts not yet in `cats`, most frequent in `occurrences` first and
/// ties to the lower id, until |cats| reaches k or the candidates run out.
void fill_by_frequency(CatalystSet& cats, std::size_t k, std::span<const CatalystId> occurrences);

/// Generic greedy inclusion over items carrying catalyst sets. `objective`
/// scores a candidate selection (indices into items); returns the selection
/// order.
template <typename Objective>
PathInclusion greedy_inclusion(std::span<const CatalystSet> item_catalysts, std::size_t k, Objective objective) {
  PathInclusion out;
  std::vector<char> used(item_catalysts.size(), 0);
  double current = 0.0;
  while (true) {
    std::optional<std::size_t> best;
    double best_value = 0.0;
    for (std::size_t i = 0; i < item_catalysts.size(); ++i) {
      if (used[i]) continue;
      if (out.catalysts.size() + out.catalysts.count_new(item_catalysts[i]) > k) continue;
      std::vector<std::size_t> trial = out.selected;
      trial.push_back(i);
      const double value = objective(trial);
      if (!best || value > best_value) {
        best = i;
        best_value = value;
      }
    }
    if (!best) break;
    used[*best] = 1;
    out.selected.push_back(*best);
    out.catalysts.merge(item_catalysts[*best]);
    out.trace.push_back({*best, best_value, best_value - current});
    current = best_value;
  }
  return out;
}

}  // namespace catrel
