#pragma once

// Benchmark harness: runs selection algorithms over a query list and emits
// CSV rows `algo,query,k,r,seed,reliability,ms` plus a per-algorithm summary.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "catrel/query.hpp"
#include "catrel/selection.hpp"

namespace catrel {

/// Algorithm names accepted by run_benchmark.
const std::vector<std::string>& benchmark_algorithms();

struct BenchmarkConfig {
  std::size_t k = 3;
  std::size_t r = 5;
  SamplerConfig sampler;
  std::size_t eval_samples = 1000;  // MC samples for the independent re-evaluation
};

struct BenchmarkRow {
  std::string algorithm;
  std::size_t query = 0;
  std::size_t k = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  std::optional<double> reliability;  // empty when the run failed
  double ms = 0.0;
  std::string error;  // not part of the CSV
};

/// Runs every (query, algorithm). The achieved catalyst set is re-scored by
/// Monte Carlo with a seed independent of the selection run. Failures are
/// recorded in the row and the run continues.
std::vector<BenchmarkRow> run_benchmark(const UncertainGraph& graph, const std::vector<QuerySpec>& queries,
                                        const std::vector<std::string>& algorithms, const BenchmarkConfig& cfg);

/// The ms column is written as 0 unless `timing` is set, so repeated runs
/// with one seed give identical bytes.
void write_rows_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows, bool timing);
std::vector<BenchmarkRow> read_rows_csv(std::istream& in);

struct SummaryRow {
  std::string algorithm;
  std::size_t runs = 0;
  std::size_t failures = 0;
  double mean_reliability = 0.0;  // over successful runs
  double mean_ms = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<BenchmarkRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary, bool timing);

}  // namespace catrel
