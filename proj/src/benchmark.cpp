#include "catrel/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <map>
#include <sstream>

#include "catrel/graph_io.hpp"
#include "catrel/multi_query.hpp"
#include "catrel/rng.hpp"

namespace catrel {
namespace {

constexpr std::uint64_t kEvalTag = 0xe7a1;
constexpr const char* kHeader = "algo,query,k,r,seed,reliability,ms";

bool is_pair(const QuerySpec& q) {
  return q.kind == QueryKind::Pair && q.sources.size() == 1 && q.targets.size() == 1;
}

struct Outcome {
  CatalystSet catalysts;
  std::vector<NodePair> pairs;  // pairs the re-evaluation aggregates over
  Aggregate aggregate = Aggregate::Max;
  std::vector<NodeId> peers;  // set for connectivity
};

Outcome run_one(const UncertainGraph& graph, const QuerySpec& q, const std::string& algo, const BenchmarkConfig& cfg) {
  Outcome out;
  if (algo == "ind-k" || algo == "greedy" || algo == "rel-path") {
    if (!is_pair(q)) throw PreconditionError(algo + " needs a single source-target query");
    const NodeId s = q.sources[0];
    const NodeId t = q.targets[0];
    out.pairs = {{s, t}};
    if (algo == "ind-k")
      out.catalysts = individual_topk(graph, s, t, cfg.k, cfg.sampler).catalysts;
    else if (algo == "greedy")
      out.catalysts = greedy_topk(graph, s, t, cfg.k, cfg.sampler).catalysts;
    else
      out.catalysts = rel_path(graph, s, t, cfg.k, cfg.r, cfg.sampler).catalysts;
    return out;
  }
  if (algo == "max" || algo == "avg" || algo == "min") {
    if (q.kind == QueryKind::Peers) throw PreconditionError(algo + " needs sources and targets");
    AggregateQuery aq{q.sources, q.targets, cfg.k, cfg.r, Aggregate::Max};
    aq.aggregate = algo == "max" ? Aggregate::Max : algo == "avg" ? Aggregate::Avg : Aggregate::Min;
    out.aggregate = aq.aggregate;
    out.catalysts = run_aggregate(graph, aq, cfg.sampler).catalysts;
    if (aq.aggregate == Aggregate::Max) {
      for (const auto& p : query_pairs(q.sources, q.targets))
        if (std::find(q.targets.begin(), q.targets.end(), p.source) == q.targets.end() &&
            std::find(q.sources.begin(), q.sources.end(), p.target) == q.sources.end())
          out.pairs.push_back(p);
    } else {
      out.pairs = query_pairs(q.sources, q.targets);
    }
    return out;
  }
  if (algo == "connectivity") {
    out.peers = q.kind == QueryKind::Peers ? q.peers : q.sources;
    if (q.kind != QueryKind::Peers) out.peers.insert(out.peers.end(), q.targets.begin(), q.targets.end());
    out.catalysts = connectivity_topk(graph, ConnectivityQuery{out.peers, cfg.k, cfg.r}, cfg.sampler).catalysts;
    return out;
  }
  throw PreconditionError("unknown algorithm '" + algo + "'");
}

double rescore(const UncertainGraph& graph, const Outcome& out, const SamplerConfig& eval) {
  if (!out.peers.empty()) return mc_connectivity(graph, out.peers, out.catalysts, eval).value;
  std::vector<double> values;
  for (std::size_t j = 0; j < out.pairs.size(); ++j) {
    SamplerConfig c = eval;
    c.seed = derive_seed(eval.seed, {j});
    const NodeId sources[] = {out.pairs[j].source};
    values.push_back(mc_reliability(graph, sources, out.pairs[j].target, out.catalysts, c).value);
  }
  if (values.empty()) return 0.0;
  switch (out.aggregate) {
    case Aggregate::Avg: {
      double sum = 0.0;
      for (double v : values) sum += v;
      return sum / static_cast<double>(values.size());
    }
    case Aggregate::Min:
      return *std::min_element(values.begin(), values.end());
    case Aggregate::Max:
      break;
  }
  return *std::max_element(values.begin(), values.end());
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* name) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(line, std::string("bad ") + name + " '" + std::string(field) + "'");
  return value;
}

}  // namespace

const std::vector<std::string>& benchmark_algorithms() {
  static const std::vector<std::string> names{"ind-k", "greedy", "rel-path", "max", "avg", "min", "connectivity"};
  return names;
}

std::vector<BenchmarkRow> run_benchmark(const UncertainGraph& graph, const std::vector<QuerySpec>& queries,
                                        const std::vector<std::string>& algorithms, const BenchmarkConfig& cfg) {
  std::vector<BenchmarkRow> rows;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    for (const auto& algo : algorithms) {
      BenchmarkRow row;
      row.algorithm = algo;
      row.query = qi;
      row.k = cfg.k;
      row.r = cfg.r;
      row.seed = cfg.sampler.seed;
      try {
        const auto start = std::chrono::steady_clock::now();
        const Outcome out = run_one(graph, queries[qi], algo, cfg);
        row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        SamplerConfig eval = cfg.sampler;
        eval.samples = cfg.eval_samples;
        eval.seed = derive_seed(cfg.sampler.seed, {kEvalTag, qi});
        row.reliability = rescore(graph, out, eval);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_rows_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool timing) {
  out << kHeader << '\n';
  for (const auto& row : rows) {
    out << row.algorithm << ',' << row.query << ',' << row.k << ',' << row.r << ',' << row.seed << ',';
    if (row.reliability) out << format_double(*row.reliability);
    out << ',' << (timing ? format_double(row.ms) : "0") << '\n';
  }
}

std::vector<BenchmarkRow> read_rows_csv(std::istream& in) {
  std::vector<BenchmarkRow> rows;
  std::string raw;
  std::size_t line = 0;
  if (!std::getline(in, raw) || raw != kHeader) throw ParseError(1, "expected header " + std::string(kHeader));
  ++line;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = raw;
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (f.size() != 7) throw ParseError(line, "expected 7 fields, got " + std::to_string(f.size()));
    BenchmarkRow row;
    row.algorithm = std::string(f[0]);
    row.query = parse_number<std::size_t>(f[1], line, "query");
    row.k = parse_number<std::size_t>(f[2], line, "k");
    row.r = parse_number<std::size_t>(f[3], line, "r");
    row.seed = parse_number<std::uint64_t>(f[4], line, "seed");
    if (!f[5].empty()) row.reliability = parse_number<double>(f[5], line, "reliability");
    row.ms = parse_number<double>(f[6], line, "ms");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::string, std::size_t> slot;
  for (const auto& row : rows) {
    auto [it, fresh] = slot.emplace(row.algorithm, out.size());
    if (fresh) out.push_back(SummaryRow{row.algorithm});
    auto& s = out[it->second];
    ++s.runs;
    if (!row.reliability) {
      ++s.failures;
      continue;
    }
    s.mean_reliability += *row.reliability;
    s.mean_ms += row.ms;
  }
  for (auto& s : out) {
    const std::size_t ok = s.runs - s.failures;
    if (ok == 0) continue;
    s.mean_reliability /= static_cast<double>(ok);
    s.mean_ms /= static_cast<double>(ok);
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary, bool timing) {
  out << "algo,runs,failures,mean_reliability,mean_ms\n";
  for (const auto& s : summary)
    out << s.algorithm << ',' << s.runs << ',' << s.failures << ',' << format_double(s.mean_reliability) << ','
        << (timing ? format_double(s.mean_ms) : "0") << '\n';
}

}  // namespace catrel
