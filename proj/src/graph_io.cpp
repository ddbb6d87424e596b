#include "catrel/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace catrel {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits off the next whitespace-delimited token, leaving the rest in `s`.
std::string_view next_token(std::string_view& s) {
  s = trim(s);
  const auto end = s.find_first_of(" \t");
  const auto token = s.substr(0, end);
  s = end == std::string_view::npos ? std::string_view{} : trim(s.substr(end));
  return token;
}

std::uint64_t parse_id(std::string_view token, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line, std::string("bad ") + what + " id '" + std::string(token) + "'");
  return value;
}

double parse_probability(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw ParseError(line, "bad probability '" + std::string(token) + "'");
  if (!(value > 0.0 && value <= 1.0))
    throw ParseError(line, "probability " + std::string(token) + " outside (0, 1]");
  return value;
}

struct Declared {
  std::string label;
  std::size_t line;
};

struct EdgeRow {
  std::uint64_t src;
  std::uint64_t dst;
  std::uint64_t catalyst;
  double probability;
  std::size_t line;
};

}  // namespace

LoadedGraph parse_graph(std::istream& in) {
  std::map<std::uint64_t, Declared> catalysts;
  std::map<std::uint64_t, Declared> nodes;
  std::vector<EdgeRow> rows;

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view rest = trim(raw);
    if (rest.empty() || rest.front() == '#') continue;
    const auto directive = next_token(rest);
    if (directive == "catalyst" || directive == "node") {
      const bool is_node = directive == "node";
      const auto id = parse_id(next_token(rest), line, is_node ? "node" : "catalyst");
      auto& table = is_node ? nodes : catalysts;
      if (!table.emplace(id, Declared{std::string(rest), line}).second)
        throw ParseError(line, std::string(directive) + " " + std::to_string(id) + " declared twice");
    } else if (directive == "edge") {
      EdgeRow row;
      row.line = line;
      row.src = parse_id(next_token(rest), line, "node");
      row.dst = parse_id(next_token(rest), line, "node");
      row.catalyst = parse_id(next_token(rest), line, "catalyst");
      row.probability = parse_probability(next_token(rest), line);
      if (!rest.empty()) throw ParseError(line, "trailing text '" + std::string(rest) + "'");
      rows.push_back(row);
    } else {
      throw ParseError(line, "unknown directive '" + std::string(directive) + "'");
    }
  }

  LoadedGraph out;
  auto& g = out.graph;
  std::map<std::uint64_t, CatalystId> catalyst_of;
  std::map<std::uint64_t, NodeId> node_of;
  for (const auto& [id, d] : catalysts) {
    try {
      catalyst_of[id] = g.add_catalyst(d.label);
    } catch (const StructuralError& e) {
      throw ParseError(d.line, e.what());
    }
  }
  for (const auto& [id, d] : nodes) {
    try {
      node_of[id] = g.add_node(d.label);
    } catch (const StructuralError& e) {
      throw ParseError(d.line, e.what());
    }
  }

  // Group rows by (src, dst) in order of first appearance.
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> slot;
  std::vector<std::pair<NodeId, NodeId>> ends;
  std::vector<std::map<CatalystId, double>> tables;
  for (const auto& row : rows) {
    const auto src = node_of.find(row.src);
    const auto dst = node_of.find(row.dst);
    if (src == node_of.end() || dst == node_of.end())
      throw ParseError(row.line, "unknown node " + std::to_string(src == node_of.end() ? row.src : row.dst));
    const auto cat = catalyst_of.find(row.catalyst);
    if (cat == catalyst_of.end()) throw ParseError(row.line, "unknown catalyst " + std::to_string(row.catalyst));
    auto [it, fresh] = slot.emplace(std::pair{row.src, row.dst}, tables.size());
    if (fresh) {
      ends.emplace_back(src->second, dst->second);
      tables.emplace_back();
    }
    auto& table = tables[it->second];
    auto [entry, added] = table.emplace(cat->second, row.probability);
    if (!added) {
      out.warnings.push_back("line " + std::to_string(row.line) + ": duplicate edge " + std::to_string(row.src) + " " +
                             std::to_string(row.dst) + " catalyst " + std::to_string(row.catalyst) +
                             ", keeping the larger probability");
      entry->second = std::max(entry->second, row.probability);
    }
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    std::vector<CatalystEntry> entries;
    for (const auto& [c, p] : tables[i]) entries.push_back({c, p});
    g.add_edge(ends[i].first, ends[i].second, std::move(entries));
  }
  return out;
}

LoadedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_graph(in);
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_graph(std::ostream& out, const UncertainGraph& graph) {
  for (std::size_t c = 0; c < graph.catalyst_count(); ++c)
    out << "catalyst " << c << ' ' << graph.catalyst_label(catalyst(c)) << '\n';
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    out << "node " << v;
    if (!graph.node_label(node(v)).empty()) out << ' ' << graph.node_label(node(v));
    out << '\n';
  }
  for (const auto& e : graph.edges())
    for (const auto& entry : e.table)
      out << "edge " << index(e.src) << ' ' << index(e.dst) << ' ' << index(entry.catalyst) << ' '
          << format_double(entry.probability) << '\n';
}

void save_graph(const std::filesystem::path& path, const UncertainGraph& graph) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_graph(out, graph);
}

double derive_count_probability(double count, double mu) {
  if (count < 0.0 || !(mu > 0.0)) throw PreconditionError("count must be >= 0 and mu > 0");
  return -std::expm1(-count / mu);
}

}  // namespace catrel
