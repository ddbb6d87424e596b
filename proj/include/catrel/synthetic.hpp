#pragma once

// Erdos-Renyi directed uncertain graphs for smoke runs and property tests.

#include <cstdint>

#include "catrel/graph.hpp"

namespace catrel {

struct ErdosRenyiOptions {
  std::size_t nodes = 100;
  double edge_probability = 0.05;  // per ordered pair, no self-loops
  std::size_t catalysts = 5;
  std::size_t max_table = 3;       // table size ~ Uniform{1..max_table}, capped by catalysts
  double min_probability = 0.2;    // P(e|c) ~ Uniform(min, max)
  double max_probability = 0.9;
};

UncertainGraph erdos_renyi(const ErdosRenyiOptions& options, std::uint64_t seed);

}  // namespace catrel
