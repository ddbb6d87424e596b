// Acceptance gate: one PASS/FAIL line per criterion.
//
// usage: acceptance <path-to-catrel-cli> <scratch-dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "catrel/multi_query.hpp"
#include "catrel/oracle.hpp"
#include "catrel/selection.hpp"
#include "support.hpp"

using namespace catrel;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream out;
  out.precision(digits);
  out << v;
  return out.str();
}

double exact(const UncertainGraph& g, NodeId s, NodeId t, const CatalystSet& c) {
  return exact_reliability(g, s, t, c).value;
}

void two_route_goldens() {
  const auto start = Clock::now();
  const auto g = load_fixture("two_route.graph");
  const NodeId s = N(g, "s"), t = N(g, "t");
  const std::array<std::pair<CatalystSet, double>, 4> cases{{{cats(g, {"c2"}), 0.0},
                                                             {cats(g, {"c2", "c3"}), 0.0},
                                                             {cats(g, {"c1", "c2"}), 0.3},
                                                             {cats(g, {"c1", "c2", "c3"}), 0.475}}};
  bool ok = true;
  std::string got;
  for (const auto& [c, want] : cases) {
    const double v = exact(g, s, t, c);
    ok = ok && std::abs(v - want) <= 1e-12;
    got += fmt(v, 17) + " ";
  }
  const double secs = seconds_since(start);
  report(1, "two-route goldens", ok && secs < 1.0, got + "in " + fmt(secs, 3) + "s");
}

void cold_start() {
  const auto start = Clock::now();
  const auto g = load_fixture("four_catalyst.graph");
  const NodeId s = N(g, "s"), t = N(g, "t");
  const auto best = exhaustive_topk(g, s, t, 3);
  GreedyOptions opt;
  opt.forced_first = C(g, "c4");
  const auto greedy = greedy_topk(g, s, t, 3, SamplerConfig{1000, 1, 1}, opt);
  const double greedy_exact = exact(g, s, t, greedy.catalysts);
  const double secs = seconds_since(start);
  const bool ok = std::abs(best.reliability - 0.7184) <= 1e-4 && std::abs(greedy_exact - 0.544) <= 1e-4 && secs < 5.0;
  report(2, "cold-start example", ok,
         "optimum " + fmt(best.reliability) + ", greedy " + fmt(greedy_exact) + " in " + fmt(secs, 3) + "s");
}

void path_inclusion() {
  const auto g = load_fixture("four_catalyst.graph");
  const auto paths = top_r_paths(build_multigraph(g), N(g, "s"), N(g, "t"), 3);
  const auto inc = iterative_path_inclusion(g, paths, 3, {});
  // paths[0] is s-b-t (0.64) and paths[1] is s-b-d-t (0.392).
  const bool ok = paths.size() == 3 && std::abs(paths[0].reliability - 0.64) < 1e-12 &&
                  std::abs(paths[1].reliability - 0.392) < 1e-12 && inc.selected == std::vector<std::size_t>{0, 1};
  std::string sel;
  for (std::size_t i : inc.selected) sel += std::to_string(i) + " ";
  report(3, "path inclusion example", ok, "selected path indices " + sel + "(s-b-t=0, s-b-d-t=1)");
}

void catalyst_cover() {
  const auto g = load_fixture("cover.graph");
  const auto mg = build_multigraph(g);
  std::vector<std::vector<RelPath>> grouped;
  std::vector<NodePair> pairs;
  for (const char* s : {"s1", "s2"})
    for (const char* t : {"t1", "t2"}) {
      grouped.push_back(top_r_paths(mg, N(g, s), N(g, t), 2));
      pairs.push_back({N(g, s), N(g, t)});
    }
  const auto cover = min_catalyst_set(grouped, 3);
  bool ok = cover.catalysts == cats(g, {"c1", "c2", "c3"});
  std::string values;
  for (const auto& p : pairs) {
    const double v = exact(g, p.source, p.target, cover.catalysts);
    ok = ok && v > 0.0;
    values += fmt(v, 4) + " ";
  }
  std::string names;
  for (CatalystId c : cover.catalysts) names += g.catalyst_label(c) + " ";
  report(4, "minimum catalyst set example", ok, "set " + names + "pair values " + values);
}

void oracle_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240501);
  const std::size_t k = required_samples(0.05, 0.01);
  int within = 0, cases = 0;
  while (cases < 200) {
    const auto g = random_graph(rng, {8, 12, 5, 3});
    const auto c = random_subset(rng, g.catalyst_count());
    if (positive_edge_count(g, c) > 12) continue;
    const NodeId s = node(rng() % g.node_count());
    const NodeId t = node(rng() % g.node_count());
    const NodeId sources[] = {s};
    const double mc = mc_reliability(g, sources, t, c, {k, rng(), 1}).value;
    within += std::abs(mc - exact(g, s, t, c)) <= 0.05;
    ++cases;
  }
  const double secs = seconds_since(start);
  report(5, "oracle equivalence", within >= 196 && secs < 60.0,
         std::to_string(within) + "/200 within 0.05 using K=" + std::to_string(k) + " in " + fmt(secs, 3) + "s");
}

void transform_equivalence() {
  std::mt19937_64 rng(77001);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_graph(rng, {8, 8, 5, 3});
    const auto mg = build_multigraph(g);
    const auto c = random_subset(rng, g.catalyst_count());
    const NodeId s = node(rng() % g.node_count());
    const NodeId t = node(rng() % g.node_count());
    worst = std::max(worst, std::abs(exact(g, s, t, c) - exact(mg.graph, s, t, c)));
  }
  report(6, "multigraph transform", worst <= 1e-12, "max difference " + fmt(worst, 3) + " over 100 instances");
}

// Random path family on a random graph, or a disjoint family when the graph
// has too few paths.
std::vector<RelPath> path_family(std::mt19937_64& rng) {
  const auto g = random_graph(rng, {8, 14, 6, 3});
  static std::vector<UncertainGraph> keep;  // paths point into their graph by id only
  const auto mg = build_multigraph(g);
  auto paths = top_r_paths(mg, node(0), node(g.node_count() - 1), 8);
  if (paths.size() >= 3) return paths;
  return random_disjoint_paths(rng, 3 + rng() % 4, 6).paths;
}

void count_submodularity() {
  std::mt19937_64 rng(1111);
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    const auto paths = path_family(rng);
    const std::size_t extra = rng() % paths.size();
    CatalystSet small, big;
    for (std::size_t j = 0; j < paths.size(); ++j) {
      if (j == extra) continue;
      const auto roll = rng() % 3;
      if (roll == 0) small.merge(paths[j].catalysts);
      if (roll != 2) big.merge(paths[j].catalysts);
    }
    const auto& p = paths[extra].catalysts;
    violations += small.count_new(p) < big.count_new(p);
  }
  report(7, "catalyst-count submodularity", violations == 0, std::to_string(violations) + " violations in 500 triples");
}

double induced_rel(const UncertainGraph& g, const std::vector<RelPath>& paths, const std::vector<std::size_t>& sel) {
  std::vector<RelPath> chosen;
  for (std::size_t i : sel) chosen.push_back(paths[i]);
  if (chosen.empty()) return 0.0;
  const auto sub = induced_subgraph(g, std::span<const RelPath>(chosen));
  return exact(sub.graph, *sub.local(paths[0].source()), *sub.local(paths[0].target()), sub.catalysts());
}

void path_submodularity() {
  std::mt19937_64 rng(2222);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const auto inst = random_disjoint_paths(rng, 3 + rng() % 4, 5);
    const std::size_t n = inst.paths.size();
    const std::size_t extra = rng() % n;
    std::vector<std::size_t> small, big;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == extra) continue;
      const auto roll = rng() % 3;
      if (roll == 0) small.push_back(j);
      if (roll != 2) big.push_back(j);
    }
    auto with = [&](std::vector<std::size_t> v) {
      v.push_back(extra);
      return v;
    };
    const double gain_small = induced_rel(inst.graph, inst.paths, with(small)) - induced_rel(inst.graph, inst.paths, small);
    const double gain_big = induced_rel(inst.graph, inst.paths, with(big)) - induced_rel(inst.graph, inst.paths, big);
    violations += gain_small + 1e-9 < gain_big;
  }

  // Overlapping paths: Q = s->a->x->t and R = s->y->a->t share node a, and
  // together open the strong route s->a->t that neither has alone.
  UncertainGraph g;
  const auto c = g.add_catalyst("c");
  for (const char* l : {"s", "t", "a", "x", "y"}) g.add_node(l);
  auto edge = [&](const char* u, const char* v, double p) {
    return make_choice(g, g.add_edge(N(g, u), N(g, v), {{c, p}}), c);
  };
  const auto sa = edge("s", "a", 0.9), ax = edge("a", "x", 0.1), xt = edge("x", "t", 0.1);
  const auto sy = edge("s", "y", 0.1), ya = edge("y", "a", 0.1), at = edge("a", "t", 0.9);
  const std::vector<RelPath> pair{make_path(g, {N(g, "s"), N(g, "a"), N(g, "x"), N(g, "t")}, {sa, ax, xt}),
                                  make_path(g, {N(g, "s"), N(g, "y"), N(g, "a"), N(g, "t")}, {sy, ya, at})};
  const double alone = induced_rel(g, pair, {1});
  const double after = induced_rel(g, pair, {0, 1}) - induced_rel(g, pair, {0});
  const bool counter = after > alone + 1e-9;
  report(8, "path-set submodularity", violations == 0 && counter,
         std::to_string(violations) + " violations in 200 disjoint triples; overlapping counter-instance gains " +
             fmt(alone) + " alone vs " + fmt(after) + " after its partner");
}

void approximation() {
  std::mt19937_64 rng(4444);
  int below_r = 0, below_bound = 0, bound_cases = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t r = 2 + rng() % 4;
    const auto inst = random_disjoint_paths(rng, r, 5);
    const auto& g = inst.graph;
    const std::size_t k = 1 + rng() % 3;
    const NodeId s = node(0), t = node(1);
    const double achieved = exact(g, s, t, rel_path(g, s, t, k, r, {}).catalysts);
    const double optimum = exhaustive_topk(g, s, t, k).reliability;
    below_r += achieved + 1e-12 < optimum / static_cast<double>(r);
    const auto top = top_r_paths(build_multigraph(g), s, t, r);
    try {
      const auto rep = curvature_report(top, k);
      ++bound_cases;
      below_bound += achieved + 1e-12 < rep.bound * optimum;
    } catch (const PreconditionError&) {
    }
  }
  report(9, "approximation guarantee", below_r == 0 && below_bound == 0,
         std::to_string(below_r) + " below opt/r, " + std::to_string(below_bound) + " below bound*opt over " +
             std::to_string(bound_cases) + " curvature cases");
}

void monotonicity() {
  std::mt19937_64 rng(5555);
  int violations = 0;
  for (int i = 0; i < 500; ++i) {
    const auto g = random_graph(rng);
    const auto small = random_subset(rng, g.catalyst_count());
    CatalystSet big = small;
    big.merge(random_subset(rng, g.catalyst_count()));
    const NodeId s = node(rng() % g.node_count());
    const NodeId t = node(rng() % g.node_count());
    violations += exact(g, s, t, small) > exact(g, s, t, big) + 1e-12;
  }
  report(10, "monotonicity", violations == 0, std::to_string(violations) + " violations in 500 cases");
}

// s and t joined by planted paths whose hops carry different catalysts, plus
// a few random noise edges between interior nodes.
UncertainGraph planted(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> prob(0.3, 0.95);
  UncertainGraph g;
  const std::size_t n_cats = 6;
  for (std::size_t i = 0; i < n_cats; ++i) g.add_catalyst({});
  g.add_node("s");
  g.add_node("t");
  std::vector<NodeId> interior;
  const std::size_t planted_paths = 3 + rng() % 2;
  for (std::size_t p = 0; p < planted_paths; ++p) {
    const std::size_t len = 2 + rng() % 2;
    NodeId prev = node(0);
    for (std::size_t h = 0; h < len; ++h) {
      const NodeId next = h + 1 == len ? node(1) : g.add_node();
      if (h + 1 != len) interior.push_back(next);
      std::vector<CatalystEntry> table{{catalyst(rng() % n_cats), prob(rng)}};
      g.add_edge(prev, next, table);
      prev = next;
    }
  }
  for (int noise = 0; noise < 3; ++noise) {
    const NodeId u = interior[rng() % interior.size()];
    const NodeId v = interior[rng() % interior.size()];
    if (u != v) g.add_edge(u, v, {{catalyst(rng() % n_cats), prob(rng)}});
  }
  return g;
}

void baseline_ordering() {
  std::mt19937_64 rng(6666);
  const SamplerConfig cfg{1000, 99, 1};
  double sum_rp = 0, sum_gr = 0, sum_ind = 0;
  int inv_rp_gr = 0, inv_gr_ind = 0;
  for (int i = 0; i < 50; ++i) {
    const auto g = planted(rng);
    const NodeId s = node(0), t = node(1);
    const std::size_t k = 3;
    const double rp = exact(g, s, t, rel_path(g, s, t, k, 5, cfg).catalysts);
    const double gr = exact(g, s, t, greedy_topk(g, s, t, k, cfg).catalysts);
    const double ind = exact(g, s, t, individual_topk(g, s, t, k, cfg).catalysts);
    sum_rp += rp;
    sum_gr += gr;
    sum_ind += ind;
    inv_rp_gr += rp + 1e-9 < gr;
    inv_gr_ind += gr + 1e-9 < ind;
  }
  const bool ok = sum_rp >= sum_gr && sum_gr >= sum_ind && inv_rp_gr <= 5 && inv_gr_ind <= 5;
  report(11, "baseline ordering", ok,
         "means rel-path " + fmt(sum_rp / 50) + ", greedy " + fmt(sum_gr / 50) + ", individual " + fmt(sum_ind / 50) +
             "; inversions " + std::to_string(inv_rp_gr) + " and " + std::to_string(inv_gr_ind));
}

std::string capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  pclose(pipe);
  return out;
}

void determinism(const std::string& cli, const std::filesystem::path& scratch) {
  std::filesystem::create_directories(scratch);
  const std::string graph = (scratch / "er.graph").string();
  const std::string queries = (scratch / "er.queries").string();
  const std::string four_catalyst = data_path("four_catalyst.graph");
  const std::string cover = data_path("cover.graph");
  {
    std::ofstream(graph) << capture(cli + " gen-graph --nodes 60 --edge-prob 0.05 --catalysts 6 --seed 3");
    std::ofstream(queries) << capture(cli + " gen-queries --graph " + graph + " --mode distance --d 3 --count 5 --seed 3");
  }
  const std::vector<std::string> commands{
      cli + " query --graph " + four_catalyst + " --source s --target t --k 3 --r 3 --seed 42",
      cli + " query --graph " + four_catalyst + " --source s --target t --k 2 --algo greedy --seed 42",
      cli + " query --graph " + cover + " --sources s1,s2 --targets t1,t2 --aggregate min --k 3 --r 2 --seed 42",
      cli + " query --graph " + cover + " --sources s1,s2 --targets t1,t2 --aggregate avg --k 3 --r 2 --seed 42",
      cli + " query --graph " + cover + " --peers s1,t1,t2 --k 3 --r 3 --seed 42",
      cli + " oracle --graph " + four_catalyst + " --source s --target t --topk --k 3",
      cli + " bench --graph " + graph + " --queries " + queries + " --algos ind-k,greedy,rel-path --k 3 --r 4 --samples 300 --seed 42",
      cli + " gen-queries --graph " + graph + " --mode multi --count 4 --seed 42",
  };
  int same = 0;
  bool nonempty = true;
  for (const auto& c : commands) {
    const std::string a = capture(c);
    const std::string b = capture(c);
    same += a == b;
    nonempty = nonempty && a.size() > 10;
  }
  report(12, "CLI determinism", same == static_cast<int>(commands.size()) && nonempty,
         std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical across two runs");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <catrel-cli> <scratch-dir>\n";
    return 2;
  }
  two_route_goldens();
  cold_start();
  path_inclusion();
  catalyst_cover();
  oracle_equivalence();
  transform_equivalence();
  count_submodularity();
  path_submodularity();
  approximation();
  monotonicity();
  baseline_ordering();
  determinism(argv[1], argv[2]);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
