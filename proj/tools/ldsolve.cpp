// ldsolve: command-line front end for the lightest-derivation solvers.
//
// Exit codes: 0 success, 1 usage or input error, 2 no derivation,
// 3 benchmark energy mismatch.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ld/abstraction.hpp"
#include "ld/engine.hpp"
#include "ld/errors.hpp"
#include "ld/hald.hpp"
#include "ld/problem_io.hpp"
#include "ld/problem_tools.hpp"
#include "ld/problems/convex.hpp"
#include "ld/problems/curves.hpp"
#include "ld/problems/fixtures.hpp"
#include "ld/problems/grammar.hpp"
#include "ld/problems/graph.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoDerivation = 2;
constexpr int kExitMismatch = 3;

struct Config {
  std::string input;
  std::string algo = "kld";
  std::string tokens;
  int levels = 0;
  int N = 20;
  int R = 32;
  double sigma = 25;
  std::uint64_t seed = 0;
  int k1 = 4;
  double lambda = 1.0;
  double mu = 16.0;
  std::string trace;
  std::string out;
  bool assert_monotone = false;
  bool verbose = false;
};

struct BenchConfig {
  std::vector<std::string> algos{"dp", "hald"};
  std::vector<std::uint64_t> seeds;
  std::vector<double> sigmas{50};
  std::vector<int> radii{32};
  int N = 20;
  int levels = 0;
  std::string out;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ld::InputError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ld::InputError("cannot write '" + path + "'");
  return out;
}

ld::RunOptions run_options(const Config& cfg) {
  ld::RunOptions opts;
  opts.assert_monotone = cfg.assert_monotone;
  opts.record_pushes = !cfg.trace.empty();
  return opts;
}

void write_trace(const Config& cfg, const ld::RunResult& r) {
  if (cfg.trace.empty()) return;
  std::ofstream out = open_output(cfg.trace);
  ld::write_trace_jsonl(out, r.stats, r.solution.registry());
}

void report_stats(const Config& cfg, std::uint64_t expansions, std::uint64_t pushes) {
  if (cfg.verbose) std::cerr << "expansions " << expansions << " pushes " << pushes << '\n';
}

// Runs kld or dp on a problem and prints the goal weight.
int solve_generic(const ld::Problem& p, const Config& cfg) {
  std::optional<ld::Weight> weight;
  if (cfg.algo == "dp") {
    if (!cfg.trace.empty()) throw UsageError("--trace needs a prioritized algorithm");
    weight = ld::dp_acyclic(p.is_grounded() ? p : ld::ground(p, 10'000'000)).goal_weight;
  } else if (cfg.algo == "kld") {
    const ld::RunResult r = ld::kld(p, run_options(cfg));
    write_trace(cfg, r);
    report_stats(cfg, r.stats.expansions, r.stats.pushes);
    weight = r.solution.goal_weight;
  } else {
    throw UsageError("algorithm '" + cfg.algo + "' is not available here (use kld or dp)");
  }
  if (!weight) {
    std::cerr << "no derivation of the goal\n";
    return kExitNoDerivation;
  }
  std::cout << ld::format_weight(*weight) << '\n';
  return kExitOk;
}

int cmd_graph(const Config& cfg) {
  std::ifstream in = open_input(cfg.input);
  return solve_generic(ld::graph_problem(ld::read_graph(in)), cfg);
}

int cmd_rules(const Config& cfg) {
  std::ifstream in = open_input(cfg.input);
  return solve_generic(ld::read_problem(in), cfg);
}

int cmd_parse(const Config& cfg) {
  std::ifstream in = open_input(cfg.input);
  const ld::Grammar g = ld::read_grammar(in);
  const std::vector<std::string> tokens = ld::tokenize(cfg.tokens);
  return solve_generic(ld::parse_problem(g, tokens), cfg);
}

int default_levels(int R) { return std::max(1, std::countr_zero(static_cast<unsigned>(std::max(R, 1))) ); }

int cmd_convex(const Config& cfg) {
  const ld::ConvexMethod method = ld::ConvexMethod::parse(cfg.algo);
  if (!cfg.trace.empty() && method.kind == ld::ConvexMethod::Kind::kDp)
    throw UsageError("--trace needs a prioritized algorithm");
  ld::Image img;
  ld::Pixel center;
  if (cfg.input.empty()) {
    img = ld::gen_circle_image({cfg.R, cfg.sigma, cfg.seed});
    center = {cfg.R, cfg.R};
  } else {
    std::ifstream in = open_input(cfg.input);
    img = ld::read_pgm(in);
    center = {img.width() / 2, img.height() / 2};
  }
  const ld::ConvexSpec spec = ld::convex_data_cost(img, center, cfg.N, cfg.R);
  const int levels = cfg.levels > 0 ? cfg.levels : default_levels(cfg.R);

  ld::ConvexRun run;
  if (!cfg.trace.empty() || cfg.assert_monotone) {
    // Traced runs go through the engine directly so the trace can be written.
    std::ofstream trace;
    if (!cfg.trace.empty()) trace = open_output(cfg.trace);
    if (method.kind == ld::ConvexMethod::Kind::kHald) {
      const ld::Hierarchy h = ld::convex_hierarchy(spec, levels);
      ld::HaldOptions opts;
      opts.assert_monotone = cfg.assert_monotone;
      opts.record_pushes = !cfg.trace.empty();
      const ld::HaldResult r = ld::run_hald(h, opts);
      if (trace.is_open()) ld::write_hald_trace_jsonl(trace, r, h);
      run.expansions = r.total_expansions;
      run.pushes = r.stats.pushes;
      if (r.goal_derived)
        run.solution = ld::ConvexSolution{r.goal_weight, ld::convex_radii(*r.goal_derivation, h.level(0).registry(), cfg.N)};
    } else if (method.kind == ld::ConvexMethod::Kind::kDp) {
      run = ld::solve_convex(spec, method, levels);
    } else {
      const ld::Hierarchy h = ld::convex_hierarchy(spec, method.kind == ld::ConvexMethod::Kind::kAstarPdb ? method.pdb_level + 1 : 1);
      const ld::Problem p = h.level(0).problem();
      const ld::RunResult r = method.kind == ld::ConvexMethod::Kind::kKld
                                  ? ld::kld(p, run_options(cfg))
                                  : ld::astar_ld(p, ld::level_pdb(h, static_cast<std::size_t>(method.pdb_level)).heuristic,
                                                 run_options(cfg));
      if (trace.is_open()) ld::write_trace_jsonl(trace, r.stats, r.solution.registry());
      run.expansions = r.stats.expansions;
      run.pushes = r.stats.pushes;
      if (r.goal_derived)
        run.solution = ld::ConvexSolution{*r.solution.goal_weight,
                                          ld::convex_radii(ld::get_derivation(r.solution, p.goal()), p.registry(), cfg.N)};
    }
  } else {
    run = ld::solve_convex(spec, method, levels);
  }
  report_stats(cfg, run.expansions, run.pushes);
  if (!run.solution) {
    std::cerr << "no convex hypothesis\n";
    return kExitNoDerivation;
  }
  std::cout << ld::format_weight(run.solution->energy) << '\n';
  if (cfg.verbose) {
    std::cerr << "radii";
    for (int r : run.solution->radii) std::cerr << ' ' << r;
    std::cerr << '\n';
  }
  if (!cfg.out.empty()) {
    std::ofstream out = open_output(cfg.out);
    ld::write_ppm(out, ld::convex_overlay(img, center, run.solution->radii));
  }
  return kExitOk;
}

int cmd_curve(const Config& cfg) {
  std::ifstream in = open_input(cfg.input);
  const ld::Image img = ld::read_pgm(in);
  ld::CurveSpec spec = ld::CurveSpec::for_image(img, cfg.k1);
  if (cfg.levels > 0) spec.L = cfg.levels;
  spec.lambda = cfg.lambda;
  spec.mu = cfg.mu;
  const ld::Problem p = ld::curve_problem(img, spec);

  ld::RunResult r{ld::SolutionSet(p.registry_ptr()), {}, false};
  if (cfg.algo == "kld") {
    r = ld::kld(p, run_options(cfg));
  } else if (cfg.algo == "astar-pdb:1") {
    const ld::CurvePyramid pyramid = ld::curve_pyramid(p, img, spec);
    r = ld::astar_ld(p, ld::curve_pdb_heuristic(pyramid), run_options(cfg));
  } else {
    throw UsageError("algorithm '" + cfg.algo + "' is not available for curves (use kld or astar-pdb:1)");
  }
  write_trace(cfg, r);
  report_stats(cfg, r.stats.expansions, r.stats.pushes);
  if (!r.goal_derived) {
    std::cerr << "no curve\n";
    return kExitNoDerivation;
  }
  std::cout << ld::format_weight(*r.solution.goal_weight) << '\n';
  const std::vector<ld::Pixel> points = ld::curve_points(ld::get_derivation(r.solution, p.goal()), p.registry());
  if (cfg.verbose) {
    std::cerr << "points";
    for (ld::Pixel q : points) std::cerr << " (" << q.x << ',' << q.y << ')';
    std::cerr << '\n';
  }
  if (!cfg.out.empty()) {
    std::ofstream out = open_output(cfg.out);
    ld::write_ppm(out, ld::curve_overlay(img, points));
  }
  return kExitOk;
}

int cmd_bench_convex(const BenchConfig& cfg) {
  if (cfg.seeds.empty()) throw UsageError("--seeds must list at least one seed");
  if (cfg.algos.empty()) throw UsageError("--algo must list at least one algorithm");
  std::vector<ld::ConvexMethod> methods;
  for (const std::string& a : cfg.algos) methods.push_back(ld::ConvexMethod::parse(a));

  std::ofstream file;
  if (!cfg.out.empty()) file = open_output(cfg.out);
  std::ostream& out = cfg.out.empty() ? std::cout : file;
  out << "algo,seed,sigma,R,N,energy,expansions,pushes,ms\n";
  int status = kExitOk;
  for (int R : cfg.radii)
    for (double sigma : cfg.sigmas)
      for (std::uint64_t seed : cfg.seeds) {
        const ld::Image img = ld::gen_circle_image({R, sigma, seed});
        const ld::ConvexSpec spec = ld::convex_data_cost(img, {R, R}, cfg.N, R);
        const int levels = cfg.levels > 0 ? cfg.levels : default_levels(R);
        std::optional<ld::Weight> reference;
        for (const ld::ConvexMethod& m : methods) {
          const auto start = std::chrono::steady_clock::now();
          const ld::ConvexRun run = ld::solve_convex(spec, m, levels);
          const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          const ld::Weight energy = run.solution ? run.solution->energy : ld::kInfinity;
          out << m.name() << ',' << seed << ',' << sigma << ',' << R << ',' << cfg.N << ',' << ld::format_weight(energy)
              << ',' << run.expansions << ',' << run.pushes << ',' << std::llround(ms) << '\n';
          if (!reference) {
            reference = energy;
          } else if (std::abs(energy - *reference) > 1e-9 * std::max<ld::Weight>(1, std::abs(*reference)) &&
                     !(energy == ld::kInfinity && *reference == ld::kInfinity)) {
            std::cerr << "energy mismatch on seed " << seed << " sigma " << sigma << " R " << R << ": " << m.name()
                      << " gives " << ld::format_weight(energy) << ", " << methods.front().name() << " gives "
                      << ld::format_weight(*reference) << '\n';
            status = kExitMismatch;
          }
        }
      }
  return status;
}

int cmd_trace_hald(const Config& cfg) {
  ld::Hierarchy h;
  if (cfg.input.empty()) {
    h = ld::fixture_h1();
  } else {
    std::ifstream in = open_input(cfg.input);
    h = ld::read_hierarchy(in);
  }
  ld::HaldOptions opts;
  opts.record_pushes = true;
  opts.assert_monotone = true;
  const ld::HaldResult r = ld::run_hald(h, opts);
  std::ofstream file;
  if (!cfg.out.empty()) file = open_output(cfg.out);
  ld::write_hald_trace_jsonl(cfg.out.empty() ? std::cout : file, r, h);
  return r.goal_derived ? kExitOk : kExitNoDerivation;
}

void add_common(CLI::App* app, Config& cfg) {
  app->add_option("--trace", cfg.trace, "Write a JSON-lines trace of pushes and expansions");
  app->add_flag("--assert-monotone", cfg.assert_monotone, "Fail on a priority regression");
  app->add_flag("-v,--verbose", cfg.verbose, "Print statistics to stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lightest derivation solvers"};
  app.require_subcommand(1);
  Config cfg;
  BenchConfig bench;

  CLI::App* solve = app.add_subcommand("solve", "Solve one problem instance and print the goal weight");
  solve->require_subcommand(1);

  CLI::App* graph = solve->add_subcommand("graph", "Shortest path in an edge-list graph");
  graph->add_option("input", cfg.input, "Graph file")->required();
  graph->add_option("--algo", cfg.algo, "kld or dp")->capture_default_str();
  add_common(graph, cfg);

  CLI::App* rules = solve->add_subcommand("rules", "Lightest derivation of a problem in rule-text form");
  rules->add_option("input", cfg.input, "Problem file")->required();
  rules->add_option("--algo", cfg.algo, "kld or dp")->capture_default_str();
  add_common(rules, cfg);

  CLI::App* parse = solve->add_subcommand("parse", "Lightest parse under a weighted CNF grammar");
  parse->add_option("input", cfg.input, "Grammar file")->required();
  parse->add_option("--tokens", cfg.tokens, "Whitespace-separated input tokens")->required();
  parse->add_option("--algo", cfg.algo, "kld or dp")->capture_default_str();
  add_common(parse, cfg);

  CLI::App* convex = solve->add_subcommand("convex", "Optimal convex boundary around the image center");
  convex->add_option("input", cfg.input, "PGM image (a synthetic circle image when omitted)");
  convex->add_option("--algo", cfg.algo, "dp, kld, astar-pdb:<k> or hald")->default_str("hald");
  convex->add_option("--levels", cfg.levels, "Hierarchy levels for hald (default log2 R)");
  convex->add_option("--N", cfg.N, "Boundary samples")->capture_default_str()->check(CLI::Range(3, 1000));
  convex->add_option("--R", cfg.R, "Radius bound")->capture_default_str()->check(CLI::Range(1, 1024));
  convex->add_option("--sigma", cfg.sigma, "Noise of the synthetic image")->capture_default_str();
  convex->add_option("--seed", cfg.seed, "Seed of the synthetic image")->capture_default_str();
  convex->add_option("--out", cfg.out, "Write the boundary overlay as PPM");
  add_common(convex, cfg);

  CLI::App* curve = solve->add_subcommand("curve", "Most salient almost-straight curve");
  curve->add_option("input", cfg.input, "PGM image")->required();
  curve->add_option("--algo", cfg.algo, "kld or astar-pdb:1")->capture_default_str();
  curve->add_option("--levels", cfg.levels, "Maximum composition depth (default fits the image)");
  curve->add_option("--k1", cfg.k1, "Shortest base segment")->capture_default_str()->check(CLI::PositiveNumber);
  curve->add_option("--lambda", cfg.lambda, "Reward per unit of curve length")->capture_default_str();
  curve->add_option("--mu", cfg.mu, "Shape cost scale")->capture_default_str();
  curve->add_option("--out", cfg.out, "Write the curve overlay as PPM");
  add_common(curve, cfg);

  CLI::App* bench_cmd = app.add_subcommand("bench-convex", "Compare convex solvers on synthetic circle images (CSV)");
  bench_cmd->add_option("--algo", bench.algos, "Algorithms, comma separated")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--seeds", bench.seeds, "Seeds, comma separated")->delimiter(',')->required();
  bench_cmd->add_option("--sigma", bench.sigmas, "Noise levels, comma separated")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--R", bench.radii, "Radius bounds, comma separated")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--N", bench.N, "Boundary samples")->capture_default_str()->check(CLI::Range(3, 1000));
  bench_cmd->add_option("--levels", bench.levels, "Hierarchy levels for hald (default log2 R)");
  bench_cmd->add_option("--out", bench.out, "CSV path (default stdout)");

  CLI::App* trace = app.add_subcommand("trace-hald", "JSON-lines HA*LD trace of a hierarchy (the two-level example by default)");
  trace->add_option("input", cfg.input, "Hierarchy file");
  trace->add_option("--out", cfg.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (graph->parsed()) return cmd_graph(cfg);
    if (rules->parsed()) return cmd_rules(cfg);
    if (parse->parsed()) return cmd_parse(cfg);
    if (convex->parsed()) {
      if (convex->count("--algo") == 0) cfg.algo = "hald";
      return cmd_convex(cfg);
    }
    if (curve->parsed()) return cmd_curve(cfg);
    if (bench_cmd->parsed()) return cmd_bench_convex(bench);
    if (trace->parsed()) return cmd_trace_hald(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ld::NotDerived& e) {
    std::cerr << e.what() << '\n';
    return kExitNoDerivation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
