#pragma once

// Query workloads: random generation from a seed, and a one-query-per-line
// text format.
//
//   pair <s> <t>
//   multi <s1,s2,...> <t1,t2,...>
//   peers <q1,q2,...>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "catrel/graph.hpp"

namespace catrel {

enum class QueryKind { Pair, Multi, Peers };

struct QuerySpec {
  QueryKind kind = QueryKind::Pair;
  std::vector<NodeId> sources;  // Pair and Multi
  std::vector<NodeId> targets;  // Pair and Multi
  std::vector<NodeId> peers;    // Peers

  friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

enum class QueryMode { RandomPair, DistanceBounded, Multi, Peers };

struct QueryOptions {
  QueryMode mode = QueryMode::RandomPair;
  std::size_t distance = 2;  // hop bound for DistanceBounded
  std::size_t sources = 2;   // |S| for Multi
  std::size_t targets = 2;   // |T| for Multi
  bool disjoint = true;      // Multi: keep S and T apart
  std::size_t peers = 3;     // |Q| for Peers
};

inline constexpr std::size_t kQueryRetries = 100;

/// Deterministic in (graph, options, seed). DistanceBounded picks the source
/// uniformly and the target uniformly among nodes within `distance` directed
/// hops, resampling the source up to kQueryRetries times.
QuerySpec generate_query(const UncertainGraph& graph, const QueryOptions& options, std::uint64_t seed);

/// Query i uses a seed derived from (seed, i).
std::vector<QuerySpec> generate_queries(const UncertainGraph& graph, const QueryOptions& options, std::size_t count,
                                        std::uint64_t seed);

/// Nodes reachable from `from` in 1..d hops ignoring probabilities, ascending.
std::vector<NodeId> within_hops(const UncertainGraph& graph, NodeId from, std::size_t d);

std::vector<QuerySpec> parse_queries(std::istream& in, const UncertainGraph& graph);
std::vector<QuerySpec> load_queries(const std::filesystem::path& path, const UncertainGraph& graph);
void write_queries(std::ostream& out, const std::vector<QuerySpec>& queries);
std::string format_query(const QuerySpec& query);

}  // namespace catrel
