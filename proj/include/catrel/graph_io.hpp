#pragma once

// Line-oriented graph files:
//
//   # comment
//   catalyst <id> <label>
//   node <id> [label]
//   edge <src> <dst> <catalyst-id> <probability>
//
// Ids are non-negative integers; internal ids follow ascending file ids, so a
// file with dense ids 0..n-1 keeps them. Rows naming the same (src, dst) pair
// become one edge; repeated (src, dst, catalyst) rows keep the larger
// probability. Labels run to the end of the line.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "catrel/graph.hpp"

namespace catrel {

struct LoadedGraph {
  UncertainGraph graph;
  std::vector<std::string> warnings;
};

LoadedGraph parse_graph(std::istream& in);
LoadedGraph load_graph(const std::filesystem::path& path);

void write_graph(std::ostream& out, const UncertainGraph& graph);
void save_graph(const std::filesystem::path& path, const UncertainGraph& graph);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Exponential-cdf probability 1 - exp(-count / mu) for a catalyst seen
/// `count` times on an edge. Zero counts give 0; such rows are left out.
double derive_count_probability(double count, double mu);

}  // namespace catrel
