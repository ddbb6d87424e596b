#include "catrel/synthetic.hpp"

#include <algorithm>
#include <numeric>

#include "catrel/rng.hpp"

namespace catrel {

UncertainGraph erdos_renyi(const ErdosRenyiOptions& options, std::uint64_t seed) {
  if (options.catalysts == 0 || options.max_table == 0) throw PreconditionError("need at least one catalyst per edge");
  if (!(options.min_probability > 0.0 && options.min_probability <= options.max_probability &&
        options.max_probability <= 1.0))
    throw PreconditionError("probability range must lie in (0, 1]");
  SplitMix64 rng(seed);
  UncertainGraph g;
  for (std::size_t c = 0; c < options.catalysts; ++c) g.add_catalyst({});
  for (std::size_t v = 0; v < options.nodes; ++v) g.add_node("v" + std::to_string(v));

  std::vector<std::uint32_t> pool(options.catalysts);
  std::iota(pool.begin(), pool.end(), 0u);
  const std::size_t max_table = std::min(options.max_table, options.catalysts);
  for (std::size_t u = 0; u < options.nodes; ++u)
    for (std::size_t v = 0; v < options.nodes; ++v) {
      if (u == v || !rng.bernoulli(options.edge_probability)) continue;
      const std::size_t size = 1 + rng.below(max_table);
      std::vector<CatalystEntry> table;
      for (std::size_t i = 0; i < size; ++i) {
        std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
        const double p = options.min_probability + (options.max_probability - options.min_probability) * rng.uniform();
        table.push_back({catalyst(pool[i]), std::max(p, options.min_probability)});
      }
      g.add_edge(node(u), node(v), std::move(table));
    }
  return g;
}

}  // namespace catrel
