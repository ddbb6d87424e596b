#include "catrel/query.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "catrel/rng.hpp"

namespace catrel {
namespace {

// First `count` entries of a seeded partial Fisher-Yates shuffle of 0..n-1.
std::vector<NodeId> distinct_nodes(std::size_t n, std::size_t count, SplitMix64& rng) {
  if (count > n) throw PreconditionError("query needs " + std::to_string(count) + " nodes, graph has " +
                                         std::to_string(n));
  std::vector<std::uint32_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::uint32_t>(i);
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(ids[i], ids[j]);
    out.push_back(node(ids[i]));
  }
  return out;
}

std::vector<NodeId> parse_node_list(std::string_view token, const UncertainGraph& graph, std::size_t line) {
  std::vector<NodeId> out;
  while (!token.empty()) {
    const auto comma = token.find(',');
    const auto part = token.substr(0, comma);
    std::uint32_t id = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), id);
    if (part.empty() || ec != std::errc{} || ptr != part.data() + part.size())
      throw ParseError(line, "bad node id '" + std::string(part) + "'");
    if (!graph.has_node(node(id))) throw ParseError(line, "unknown node " + std::to_string(id));
    out.push_back(node(id));
    token = comma == std::string_view::npos ? std::string_view{} : token.substr(comma + 1);
  }
  if (out.empty()) throw ParseError(line, "empty node list");
  return out;
}

std::string join(const std::vector<NodeId>& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(index(nodes[i]));
  }
  return out;
}

}  // namespace

std::vector<NodeId> within_hops(const UncertainGraph& graph, NodeId from, std::size_t d) {
  graph.require_node(from);
  std::vector<std::size_t> depth(graph.node_count(), static_cast<std::size_t>(-1));
  std::vector<NodeId> frontier{from};
  depth[index(from)] = 0;
  for (std::size_t hop = 1; hop <= d && !frontier.empty(); ++hop) {
    std::vector<NodeId> next;
    for (NodeId u : frontier)
      for (EdgeIndex e : graph.out_edges(u)) {
        const NodeId v = graph.edge(e).dst;
        if (depth[index(v)] != static_cast<std::size_t>(-1)) continue;
        depth[index(v)] = hop;
        next.push_back(v);
      }
    frontier = std::move(next);
  }
  std::vector<NodeId> out;
  for (std::size_t v = 0; v < graph.node_count(); ++v)
    if (depth[v] != static_cast<std::size_t>(-1) && depth[v] > 0) out.push_back(node(v));
  return out;
}

QuerySpec generate_query(const UncertainGraph& graph, const QueryOptions& options, std::uint64_t seed) {
  const std::size_t n = graph.node_count();
  if (n == 0) throw PreconditionError("cannot draw queries from an empty graph");
  SplitMix64 rng(seed);
  QuerySpec q;
  switch (options.mode) {
    case QueryMode::RandomPair: {
      const auto picked = distinct_nodes(n, 2, rng);
      q.sources = {picked[0]};
      q.targets = {picked[1]};
      return q;
    }
    case QueryMode::DistanceBounded: {
      if (options.distance == 0) throw PreconditionError("distance bound must be at least 1");
      for (std::size_t attempt = 0; attempt < kQueryRetries; ++attempt) {
        const NodeId s = node(rng.below(n));
        const auto near = within_hops(graph, s, options.distance);
        if (near.empty()) continue;
        q.sources = {s};
        q.targets = {near[rng.below(near.size())]};
        return q;
      }
      throw PreconditionError("no source with a node within " + std::to_string(options.distance) + " hops after " +
                              std::to_string(kQueryRetries) + " draws");
    }
    case QueryMode::Multi: {
      q.kind = QueryKind::Multi;
      if (options.sources == 0 || options.targets == 0) throw PreconditionError("multi queries need |S|, |T| >= 1");
      if (options.disjoint) {
        auto picked = distinct_nodes(n, options.sources + options.targets, rng);
        q.sources.assign(picked.begin(), picked.begin() + static_cast<std::ptrdiff_t>(options.sources));
        q.targets.assign(picked.begin() + static_cast<std::ptrdiff_t>(options.sources), picked.end());
      } else {
        q.sources = distinct_nodes(n, options.sources, rng);
        q.targets = distinct_nodes(n, options.targets, rng);
      }
      std::sort(q.sources.begin(), q.sources.end());
      std::sort(q.targets.begin(), q.targets.end());
      return q;
    }
    case QueryMode::Peers: {
      q.kind = QueryKind::Peers;
      if (options.peers < 2) throw PreconditionError("peer queries need at least two peers");
      q.peers = distinct_nodes(n, options.peers, rng);
      std::sort(q.peers.begin(), q.peers.end());
      return q;
    }
  }
  throw PreconditionError("unknown query mode");
}

std::vector<QuerySpec> generate_queries(const UncertainGraph& graph, const QueryOptions& options, std::size_t count,
                                        std::uint64_t seed) {
  std::vector<QuerySpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_query(graph, options, derive_seed(seed, {i})));
  return out;
}

std::vector<QuerySpec> parse_queries(std::istream& in, const UncertainGraph& graph) {
  std::vector<QuerySpec> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream fields(raw);
    std::string kind;
    if (!(fields >> kind) || kind.front() == '#') continue;
    std::vector<std::string> args;
    for (std::string a; fields >> a;) args.push_back(a);
    QuerySpec q;
    if (kind == "pair" && args.size() == 2) {
      q.sources = parse_node_list(args[0], graph, line);
      q.targets = parse_node_list(args[1], graph, line);
      if (q.sources.size() != 1 || q.targets.size() != 1) throw ParseError(line, "pair takes one source and one target");
    } else if (kind == "multi" && args.size() == 2) {
      q.kind = QueryKind::Multi;
      q.sources = parse_node_list(args[0], graph, line);
      q.targets = parse_node_list(args[1], graph, line);
    } else if (kind == "peers" && args.size() == 1) {
      q.kind = QueryKind::Peers;
      q.peers = parse_node_list(args[0], graph, line);
    } else {
      throw ParseError(line, "expected 'pair s t', 'multi S T' or 'peers Q'");
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<QuerySpec> load_queries(const std::filesystem::path& path, const UncertainGraph& graph) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_queries(in, graph);
}

std::string format_query(const QuerySpec& query) {
  switch (query.kind) {
    case QueryKind::Pair:
      return "pair " + join(query.sources) + ' ' + join(query.targets);
    case QueryKind::Multi:
      return "multi " + join(query.sources) + ' ' + join(query.targets);
    case QueryKind::Peers:
      return "peers " + join(query.peers);
  }
  return {};
}

void write_queries(std::ostream& out, const std::vector<QuerySpec>& queries) {
  for (const auto& q : queries) out << format_query(q) << '\n';
}

}  // namespace catrel
