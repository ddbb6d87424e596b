// Command-line front end: query, bench, gen-queries, oracle, validate and
// gen-graph. Exit codes: 0 success, 1 query or usage error, 2 unreadable or
// malformed input file.

#include <CLI11.hpp>
#include <charconv>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "catrel/benchmark.hpp"
#include "catrel/graph_io.hpp"
#include "catrel/multi_query.hpp"
#include "catrel/oracle.hpp"
#include "catrel/query.hpp"
#include "catrel/selection.hpp"
#include "catrel/synthetic.hpp"

namespace {

using namespace catrel;
using nlohmann::ordered_json;

// Input files that cannot be opened are reported like parse errors.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string graph;
  std::size_t k = 3;
  std::size_t r = 5;
  std::size_t samples = 1000;
  std::uint64_t seed = 0x5eed;
  std::string format = "csv";
};

LoadedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  auto loaded = parse_graph(in);
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  return loaded;
}

NodeId resolve_node(const UncertainGraph& g, const std::string& name) {
  if (auto v = g.find_node(name)) return *v;
  std::uint32_t id = 0;
  const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), id);
  if (ec == std::errc{} && ptr == name.data() + name.size() && g.has_node(node(id))) return node(id);
  throw PreconditionError("unknown node '" + name + "'");
}

std::vector<NodeId> resolve_nodes(const UncertainGraph& g, const std::vector<std::string>& names) {
  std::vector<NodeId> out;
  for (const auto& n : names) out.push_back(resolve_node(g, n));
  return out;
}

CatalystSet resolve_catalysts(const UncertainGraph& g, const std::vector<std::string>& names) {
  CatalystSet out;
  for (const auto& n : names) {
    auto c = g.find_catalyst(n);
    if (!c) throw PreconditionError("unknown catalyst '" + n + "'");
    out.insert(*c);
  }
  return out;
}

std::string catalyst_list(const UncertainGraph& g, const CatalystSet& cats) {
  std::string out;
  for (CatalystId c : cats) {
    if (!out.empty()) out += ';';
    out += g.catalyst_label(c);
  }
  return out;
}

ordered_json catalyst_json(const UncertainGraph& g, const CatalystSet& cats) {
  ordered_json out = ordered_json::array();
  for (CatalystId c : cats) out.push_back(g.catalyst_label(c));
  return out;
}

SamplerConfig sampler(const Common& c) {
  SamplerConfig cfg;
  cfg.samples = c.samples;
  cfg.seed = c.seed;
  return cfg;
}

void add_common(CLI::App* cmd, Common& c, bool selection) {
  cmd->add_option("--graph", c.graph, "Graph file")->required();
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  if (selection) {
    cmd->add_option("--k", c.k, "Catalyst budget");
    cmd->add_option("--r", c.r, "Paths or trees per query");
    cmd->add_option("--samples", c.samples, "Monte Carlo samples per estimate")->check(CLI::PositiveNumber);
  }
}

struct QueryArgs {
  Common common;
  std::string algo = "rel-path";
  std::string source, target, aggregate;
  std::vector<std::string> sources, targets, peers;
};

int run_query(const QueryArgs& a) {
  const auto loaded = read_graph(a.common.graph);
  const auto& g = loaded.graph;
  const SamplerConfig cfg = sampler(a.common);
  SelectionResult result;
  std::string algo = a.algo;
  if (!a.peers.empty()) {
    algo = "connectivity";
    result = connectivity_topk(g, ConnectivityQuery{resolve_nodes(g, a.peers), a.common.k, a.common.r}, cfg);
  } else if (!a.sources.empty() || !a.targets.empty() || !a.aggregate.empty()) {
    AggregateQuery q{resolve_nodes(g, a.sources), resolve_nodes(g, a.targets), a.common.k, a.common.r,
                     Aggregate::Max};
    const std::string agg = a.aggregate.empty() ? "max" : a.aggregate;
    q.aggregate = agg == "max" ? Aggregate::Max : agg == "avg" ? Aggregate::Avg : Aggregate::Min;
    algo = agg;
    result = run_aggregate(g, q, cfg);
  } else {
    if (a.source.empty() || a.target.empty()) throw PreconditionError("give --source and --target, --sources and --targets, or --peers");
    const NodeId s = resolve_node(g, a.source);
    const NodeId t = resolve_node(g, a.target);
    if (a.algo == "ind-k")
      result = individual_topk(g, s, t, a.common.k, cfg);
    else if (a.algo == "greedy")
      result = greedy_topk(g, s, t, a.common.k, cfg);
    else
      result = rel_path(g, s, t, a.common.k, a.common.r, cfg);
  }

  if (a.common.format == "json") {
    ordered_json j;
    j["algo"] = algo;
    j["k"] = a.common.k;
    j["r"] = a.common.r;
    j["seed"] = a.common.seed;
    j["catalysts"] = catalyst_json(g, result.catalysts);
    j["reliability"] = result.achieved.value;
    j["exact"] = result.achieved.exact;
    if (!result.pair_values.empty()) j["pair_values"] = result.pair_values;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "algo,k,r,seed,catalysts,reliability,exact\n"
              << algo << ',' << a.common.k << ',' << a.common.r << ',' << a.common.seed << ','
              << catalyst_list(g, result.catalysts) << ',' << format_double(result.achieved.value) << ','
              << (result.achieved.exact ? 1 : 0) << '\n';
  }
  return 0;
}

struct BenchArgs {
  Common common;
  std::string queries;
  std::string algos = "ind-k,greedy,rel-path";
  std::size_t eval_samples = 1000;
  std::string summary;
  bool timing = false;
};

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

int run_bench(const BenchArgs& a) {
  const auto loaded = read_graph(a.common.graph);
  const auto& g = loaded.graph;
  std::ifstream qin(a.queries);
  if (!qin) throw InputError("cannot open " + a.queries);
  const auto queries = parse_queries(qin, g);
  const auto algos = split_csv_list(a.algos);
  for (const auto& name : algos)
    if (std::find(benchmark_algorithms().begin(), benchmark_algorithms().end(), name) == benchmark_algorithms().end())
      throw PreconditionError("unknown algorithm '" + name + "'");

  BenchmarkConfig cfg;
  cfg.k = a.common.k;
  cfg.r = a.common.r;
  cfg.sampler = sampler(a.common);
  cfg.eval_samples = a.eval_samples;
  const auto rows = run_benchmark(g, queries, algos, cfg);
  for (const auto& row : rows)
    if (!row.error.empty()) std::cerr << "query " << row.query << " " << row.algorithm << ": " << row.error << '\n';

  if (a.common.format == "json") {
    ordered_json j = ordered_json::array();
    for (const auto& row : rows) {
      ordered_json o;
      o["algo"] = row.algorithm;
      o["query"] = row.query;
      o["k"] = row.k;
      o["r"] = row.r;
      o["seed"] = row.seed;
      o["reliability"] = row.reliability ? ordered_json(*row.reliability) : ordered_json(nullptr);
      o["ms"] = a.timing ? row.ms : 0.0;
      if (!row.error.empty()) o["error"] = row.error;
      j.push_back(o);
    }
    std::cout << j.dump(2) << '\n';
  } else {
    write_rows_csv(std::cout, rows, a.timing);
  }
  if (!a.summary.empty()) {
    std::ofstream out(a.summary);
    if (!out) throw std::runtime_error("cannot write " + a.summary);
    write_summary_csv(out, summarize(rows), a.timing);
  }
  return 0;
}

struct GenQueryArgs {
  std::string graph;
  std::string mode = "distance";
  std::size_t distance = 2;
  std::size_t count = 10;
  std::size_t num_sources = 2;
  std::size_t num_targets = 2;
  std::size_t num_peers = 3;
  bool overlap = false;
  std::uint64_t seed = 0x5eed;
};

int run_gen_queries(const GenQueryArgs& a) {
  const auto loaded = read_graph(a.graph);
  QueryOptions opt;
  opt.mode = a.mode == "random-pair" ? QueryMode::RandomPair
             : a.mode == "distance"  ? QueryMode::DistanceBounded
             : a.mode == "multi"     ? QueryMode::Multi
                                     : QueryMode::Peers;
  opt.distance = a.distance;
  opt.sources = a.num_sources;
  opt.targets = a.num_targets;
  opt.peers = a.num_peers;
  opt.disjoint = !a.overlap;
  write_queries(std::cout, generate_queries(loaded.graph, opt, a.count, a.seed));
  return 0;
}

struct OracleArgs {
  Common common;
  std::string source, target;
  std::vector<std::string> peers, catalysts;
  std::size_t max_edges = 25;
  bool topk = false;
};

int run_oracle(const OracleArgs& a) {
  const auto loaded = read_graph(a.common.graph);
  const auto& g = loaded.graph;
  OracleOptions opt;
  opt.max_edges = a.max_edges;
  CatalystSet cats = a.catalysts.empty() ? g.all_catalysts() : resolve_catalysts(g, a.catalysts);
  double value = 0.0;
  std::uint64_t worlds = 0;
  if (!a.peers.empty()) {
    const auto r = exact_connectivity(g, resolve_nodes(g, a.peers), cats, opt);
    value = r.value;
    worlds = r.worlds_enumerated;
  } else {
    if (a.source.empty() || a.target.empty()) throw PreconditionError("give --source and --target, or --peers");
    const NodeId s = resolve_node(g, a.source);
    const NodeId t = resolve_node(g, a.target);
    if (a.topk) {
      const auto best = exhaustive_topk(g, s, t, a.common.k, opt);
      cats = best.catalysts;
      value = best.reliability;
    } else {
      const auto r = exact_reliability(g, s, t, cats, opt);
      value = r.value;
      worlds = r.worlds_enumerated;
    }
  }
  if (a.common.format == "json") {
    ordered_json j;
    j["catalysts"] = catalyst_json(g, cats);
    j["value"] = value;
    if (!a.topk) j["worlds"] = worlds;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "catalysts,value\n" << catalyst_list(g, cats) << ',' << format_double(value) << '\n';
  }
  return 0;
}

int run_validate(const std::string& path) {
  const auto loaded = read_graph(path);
  const auto& g = loaded.graph;
  std::size_t entries = 0;
  for (const auto& e : g.edges()) entries += e.table.size();
  std::cout << "nodes " << g.node_count() << "\nedges " << g.edge_count() << "\ncatalysts " << g.catalyst_count()
            << "\nentries " << entries << "\nwarnings " << loaded.warnings.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k catalyst selection on uncertain graphs"};
  app.require_subcommand(1);

  QueryArgs qa;
  auto* query = app.add_subcommand("query", "Select catalysts for one query");
  add_common(query, qa.common, true);
  query->add_option("--algo", qa.algo, "Single-pair algorithm")->check(CLI::IsMember({"ind-k", "greedy", "rel-path"}));
  query->add_option("--source", qa.source, "Source node (label or id)");
  query->add_option("--target", qa.target, "Target node");
  query->add_option("--sources", qa.sources, "Source set")->delimiter(',');
  query->add_option("--targets", qa.targets, "Target set")->delimiter(',');
  query->add_option("--peers", qa.peers, "Peer set for connectivity")->delimiter(',');
  query->add_option("--aggregate", qa.aggregate, "Aggregate for multi queries")->check(CLI::IsMember({"max", "avg", "min"}));

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run algorithms over a query file");
  add_common(bench, ba.common, true);
  bench->add_option("--queries", ba.queries, "Query file")->required();
  bench->add_option("--algos", ba.algos, "Comma-separated algorithm list");
  bench->add_option("--eval-samples", ba.eval_samples, "Samples for re-evaluating each result")->check(CLI::PositiveNumber);
  bench->add_option("--summary", ba.summary, "Write the per-algorithm summary CSV here");
  bench->add_flag("--timing", ba.timing, "Report wall time in the ms column");

  GenQueryArgs ga;
  auto* genq = app.add_subcommand("gen-queries", "Draw a random query file");
  genq->add_option("--graph", ga.graph, "Graph file")->required();
  genq->add_option("--mode", ga.mode, "Query mode")->check(CLI::IsMember({"random-pair", "distance", "multi", "peers"}));
  genq->add_option("--d", ga.distance, "Hop bound for distance mode");
  genq->add_option("--count", ga.count, "Number of queries");
  genq->add_option("--num-sources", ga.num_sources, "|S| in multi mode");
  genq->add_option("--num-targets", ga.num_targets, "|T| in multi mode");
  genq->add_option("--num-peers", ga.num_peers, "|Q| in peers mode");
  genq->add_flag("--overlap", ga.overlap, "Allow S and T to share nodes");
  genq->add_option("--seed", ga.seed, "Random seed");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Exact reliability by world enumeration");
  add_common(oracle, oa.common, false);
  oracle->add_option("--source", oa.source, "Source node");
  oracle->add_option("--target", oa.target, "Target node");
  oracle->add_option("--peers", oa.peers, "Peer set")->delimiter(',');
  oracle->add_option("--catalysts", oa.catalysts, "Catalyst labels (default: all)")->delimiter(',');
  oracle->add_option("--k", oa.common.k, "Budget for --topk");
  oracle->add_flag("--topk", oa.topk, "Exhaustive best k-subset instead of a fixed set");
  oracle->add_option("--max-edges", oa.max_edges, "Refuse graphs with more positive edges");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a graph file");
  validate->add_option("--graph", validate_path, "Graph file")->required();

  ErdosRenyiOptions er;
  std::uint64_t er_seed = 0x5eed;
  auto* gen_graph = app.add_subcommand("gen-graph", "Write a random Erdos-Renyi graph");
  gen_graph->add_option("--nodes", er.nodes, "Node count");
  gen_graph->add_option("--edge-prob", er.edge_probability, "Probability of each ordered pair");
  gen_graph->add_option("--catalysts", er.catalysts, "Catalyst count");
  gen_graph->add_option("--seed", er_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*query) return run_query(qa);
    if (*bench) return run_bench(ba);
    if (*genq) return run_gen_queries(ga);
    if (*oracle) return run_oracle(oa);
    if (*validate) return run_validate(validate_path);
    if (*gen_graph) {
      write_graph(std::cout, erdos_renyi(er, er_seed));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
