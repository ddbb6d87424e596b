#include <gtest/gtest.h>

#include "catrel/estimator.hpp"
#include "catrel/oracle.hpp"
#include "support.hpp"

using namespace catrel;
using namespace testing_support;

namespace {

ReliabilityEstimate estimate(const UncertainGraph& g, NodeId s, NodeId t, const CatalystSet& c, SamplerConfig cfg) {
  const NodeId sources[] = {s};
  return mc_reliability(g, sources, t, c, cfg);
}

}  // namespace

TEST(Estimator, RequiredSamples) {
  EXPECT_EQ(required_samples(0.05, 0.01), 1060u);
  EXPECT_EQ(required_samples(0.1, 0.05), static_cast<std::size_t>(std::ceil(std::log(40.0) / 0.02)));
  EXPECT_THROW(required_samples(0.0, 0.1), PreconditionError);
  EXPECT_THROW(required_samples(0.1, 1.0), PreconditionError);
}

TEST(Estimator, HalfwidthMatchesSampleCount) {
  ReliabilityEstimate e;
  e.samples = required_samples(0.05, 0.01);
  EXPECT_LE(e.hoeffding_halfwidth(0.01), 0.05);
}

TEST(Estimator, SameSeedSameEstimate) {
  const auto g = load_fixture("four_catalyst.graph");
  SamplerConfig cfg{5000, 42, 1};
  const auto a = estimate(g, N(g, "s"), N(g, "t"), g.all_catalysts(), cfg);
  const auto b = estimate(g, N(g, "s"), N(g, "t"), g.all_catalysts(), cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.successes, b.successes);
  cfg.parallelism = 3;
  EXPECT_EQ(estimate(g, N(g, "s"), N(g, "t"), g.all_catalysts(), cfg).successes, a.successes);
}

TEST(Estimator, TrivialCases) {
  const auto g = load_fixture("two_route.graph");
  SamplerConfig cfg{100, 1, 1};
  EXPECT_EQ(estimate(g, N(g, "s"), N(g, "s"), {}, cfg).value, 1.0);
  EXPECT_EQ(estimate(g, N(g, "s"), N(g, "t"), {}, cfg).value, 0.0);
  EXPECT_EQ(estimate(g, N(g, "s"), N(g, "t"), cats(g, {"c2", "c3"}), cfg).value, 0.0);
  const std::vector<NodeId> none;
  EXPECT_EQ(mc_reliability(g, none, N(g, "t"), g.all_catalysts(), cfg).value, 0.0);
}

TEST(Estimator, CloseToExactOnFixtures) {
  const auto g = load_fixture("four_catalyst.graph");
  SamplerConfig cfg{required_samples(0.02, 0.001), 7, 1};
  const auto c = cats(g, {"c1", "c2", "c3"});
  EXPECT_NEAR(estimate(g, N(g, "s"), N(g, "t"), c, cfg).value, 0.7184, 0.02);
}

TEST(Estimator, AgreesWithFlipAllSampler) {
  // Two different samplers of the same distribution; both must land near the
  // exact value, and near each other.
  std::mt19937_64 rng(31337);
  const std::size_t k = required_samples(0.05, 0.01);
  int misses = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_graph(rng);
    const auto c = random_subset(rng, g.catalyst_count());
    const NodeId s = node(0), t = node(g.node_count() - 1);
    const double exact = naive_reliability(g, s, t, c);
    const double lazy = estimate(g, s, t, c, {k, rng(), 1}).value;
    const double flip = flip_all_sampler(g, s, t, c, k, rng());
    misses += std::abs(lazy - exact) > 0.05;
    misses += std::abs(flip - exact) > 0.05;
  }
  EXPECT_LE(misses, 2);
}

TEST(Estimator, ConnectivityCloseToExact) {
  std::mt19937_64 rng(8);
  int misses = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_graph(rng, {6, 10, 4, 2});
    const auto c = random_subset(rng, g.catalyst_count());
    const std::vector<NodeId> q{node(0), node(1)};
    const double exact = exact_connectivity(g, q, c).value;
    misses += std::abs(mc_connectivity(g, q, c, {required_samples(0.05, 0.01), rng(), 1}).value - exact) > 0.05;
  }
  EXPECT_LE(misses, 1);
}

TEST(Estimator, MultiSourceReachesFromAnySource) {
  const auto g = load_fixture("two_route.graph");
  const std::vector<NodeId> sources{N(g, "a"), N(g, "b")};
  const auto e = mc_reliability(g, sources, N(g, "t"), g.all_catalysts(), {20000, 3, 1});
  EXPECT_NEAR(e.value, 1.0 - 0.4 * 0.5, 0.02);
}
