#include <bit>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "ld/abstraction.hpp"
#include "ld/engine.hpp"
#include "ld/hald.hpp"
#include "ld/problems/convex.hpp"
#include "ld/problems/curves.hpp"
#include "ld/problems/grammar.hpp"
#include "ld/problems/graph.hpp"

namespace {

ld::Graph grid_graph(int side, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  ld::Graph g;
  g.nodes = static_cast<std::uint32_t>(side * side);
  auto id = [side](int x, int y) { return static_cast<std::uint32_t>(y * side + x); };
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      if (x + 1 < side) g.edges.push_back({id(x, y), id(x + 1, y), static_cast<ld::Weight>(1 + gen() % 9)});
      if (y + 1 < side) g.edges.push_back({id(x, y), id(x, y + 1), static_cast<ld::Weight>(1 + gen() % 9)});
    }
  g.source = 0;
  g.target = id(side - 1, side - 1);
  return g;
}

void BM_KldGrid(benchmark::State& state) {
  const ld::Problem p = ld::graph_problem(grid_graph(static_cast<int>(state.range(0)), 1));
  ld::RunOptions opts;
  opts.assert_monotone = false;
  for (auto _ : state) benchmark::DoNotOptimize(ld::kld(p, opts).solution.goal_weight);
}
BENCHMARK(BM_KldGrid)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_ParseBalanced(benchmark::State& state) {
  ld::Grammar g;
  const int s = g.nonterminal("S");
  const int a = g.terminal("a");
  g.binary.push_back({s, s, s, 1.0});
  g.lexical.push_back({s, a, 0.5});
  g.start = s;
  const std::vector<std::string> tokens(static_cast<std::size_t>(state.range(0)), "a");
  for (auto _ : state) benchmark::DoNotOptimize(ld::kld(ld::parse_problem(g, tokens)).solution.goal_weight);
}
BENCHMARK(BM_ParseBalanced)->Arg(16)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_Convex(benchmark::State& state, const std::string& algo) {
  const int R = static_cast<int>(state.range(0));
  const ld::Image img = ld::gen_circle_image({R, 50.0, 3});
  const ld::ConvexSpec spec = ld::convex_data_cost(img, {R, R}, 20, R);
  const ld::ConvexMethod method = ld::ConvexMethod::parse(algo);
  const int levels = std::countr_zero(static_cast<unsigned>(R));
  std::uint64_t expansions = 0;
  for (auto _ : state) {
    const ld::ConvexRun run = ld::solve_convex(spec, method, levels);
    expansions = run.expansions;
    benchmark::DoNotOptimize(run.solution);
  }
  state.counters["expansions"] = static_cast<double>(expansions);
}
BENCHMARK_CAPTURE(BM_Convex, dp, std::string("dp"))->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Convex, astar_pdb2, std::string("astar-pdb:2"))->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Convex, hald, std::string("hald"))->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Curve(benchmark::State& state, bool use_pyramid) {
  const ld::Image img = ld::gen_step_image(16, 16, {0, 3}, {15, 9}, 40, 220);
  ld::CurveSpec spec;
  spec.k1 = 2;
  spec.k2 = 4;
  spec.L = 3;
  spec.lambda = 4;
  const ld::Problem p = ld::curve_problem(img, spec);
  ld::RunOptions opts;
  opts.assert_monotone = false;
  for (auto _ : state) {
    if (use_pyramid) {
      const ld::CurvePyramid pyramid = ld::curve_pyramid(p, img, spec);
      benchmark::DoNotOptimize(ld::astar_ld(p, ld::curve_pdb_heuristic(pyramid), opts).solution.goal_weight);
    } else {
      benchmark::DoNotOptimize(ld::kld(p, opts).solution.goal_weight);
    }
  }
}
BENCHMARK_CAPTURE(BM_Curve, kld, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Curve, astar_pyramid, true)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
