#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "ld/engine.hpp"
#include "ld/errors.hpp"
#include "ld/problems/fixtures.hpp"
#include "support.hpp"

using namespace ld;

namespace {

void check_sorted_by(const RunStats& stats, const std::function<Weight(const TraceRecord&)>& key) {
  for (std::size_t i = 1; i < stats.expansion_order.size(); ++i)
    CHECK(key(stats.expansion_order[i - 1]) <= key(stats.expansion_order[i]));
}

}  // namespace

TEST_CASE("KLD on the three-node graph") {
  const Problem p = graph_problem(fixture_g1());
  CHECK(p.rules().size() == 4);
  CHECK(p.registry().size() == 3);
  const RunResult r = kld(p);
  REQUIRE(r.goal_derived);
  CHECK(*r.solution.goal_weight == 3);
  CHECK(r.stats.expansions == 3);
  // path(s)=0, path(a)=1, path(b)=3; the s->b firing (5) is discarded never.
  CHECK(r.stats.expansion_order[1].weight == 1);
}

TEST_CASE("ties pop in insertion order") {
  auto reg = std::make_shared<StatementRegistry>();
  std::vector<Rule> rules;
  for (int i = 0; i < 5; ++i) rules.push_back(make_axiom(reg->intern("x", {i}), 1));
  const Statement g = reg->intern("x", {4});
  RunOptions opts;
  opts.stop = StopCondition::kQueueEmpty;
  const RunResult r = kld(Problem::grounded(reg, rules, g), opts);
  for (std::uint32_t i = 0; i < 5; ++i) CHECK(r.stats.expansion_order[i].statement.id == i);
}

TEST_CASE("no derivation leaves the goal unweighted") {
  Graph g = fixture_g1();
  g.edges.pop_back();
  g.edges.pop_back();
  const RunResult r = kld(graph_problem(g));
  CHECK_FALSE(r.goal_derived);
  CHECK_FALSE(r.solution.goal_weight.has_value());
}

TEST_CASE("dp_acyclic names a cycle") {
  auto reg = std::make_shared<StatementRegistry>();
  const Statement a = reg->intern("a"), b = reg->intern("b"), c = reg->intern("c");
  std::vector<Rule> rules{make_axiom(a, 1), make_rule({a, c}, b, 1), make_rule({b}, c, 1)};
  const Problem p = Problem::grounded(reg, rules, c);
  CHECK_THROWS_WITH_AS(dp_acyclic(p), doctest::Contains("b -> c -> b"), CyclicProblem);
  CHECK_FALSE(kld(p).goal_derived);
}

TEST_CASE("oracle equivalence on random acyclic problems") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    CAPTURE(seed);
    const Problem p = testing::random_problem(seed);
    RunOptions opts;
    opts.stop = StopCondition::kQueueEmpty;
    const SolutionSet dp = dp_acyclic(p);
    const RunResult k = kld(p, opts);
    const RunResult a = astar_ld(p, [](Statement) { return 0.0; }, opts);
    CHECK(dp.size() == k.solution.size());
    CHECK(dp.size() == a.solution.size());
    for (const auto& e : dp.entries()) {
      CHECK(k.solution.weight_of(e.statement) == e.weight);
      CHECK(a.solution.weight_of(e.statement) == e.weight);
    }
    check_sorted_by(k.stats, [](const TraceRecord& r) { return r.weight; });
  }
}

TEST_CASE("A*LD with a non-monotone heuristic trips the regression assertion") {
  auto reg = std::make_shared<StatementRegistry>();
  const Statement a = reg->intern("a"), b = reg->intern("b"), c = reg->intern("c");
  std::vector<Rule> rules{make_axiom(a, 0), make_rule({a}, b, 1), make_rule({b}, c, 1)};
  const Problem p = Problem::grounded(reg, rules, c);
  const Heuristic bad = [a](Statement s) { return s == a ? 10.0 : 0.0; };
  CHECK_THROWS_AS(astar_ld(p, bad), MonotonicityViolation);
  RunOptions lax;
  lax.assert_monotone = false;
  CHECK(*astar_ld(p, bad, lax).solution.goal_weight == 2);
}

TEST_CASE("A*LD rejects an infinite goal heuristic and prunes infinite statements") {
  const Problem p = graph_problem(fixture_g1());
  CHECK_THROWS_AS(astar_ld(p, [](Statement) { return kInfinity; }), Error);
  const Statement a = p.registry().parse("path(1)");
  const RunResult r = astar_ld(p, [a](Statement s) { return s == a ? kInfinity : 0.0; });
  CHECK(*r.solution.goal_weight == 5);
}

TEST_CASE("goal priority offset delays the goal without changing weights") {
  auto reg = std::make_shared<StatementRegistry>();
  const Statement x = reg->intern("x"), y = reg->intern("y"), goal = reg->intern("goal");
  std::vector<Rule> rules{make_axiom(x, 1), make_axiom(y, 2), make_rule({x}, goal, 0)};
  rules.push_back(Rule{Antecedents{y}, goal, WeightFn::signed_additive(-4)});
  Problem p = Problem::grounded(reg, rules, goal);
  p.set_goal_priority_offset(4);
  const RunResult r = kld(p);
  CHECK(*r.solution.goal_weight == -2);
}

TEST_CASE("traces serialize as JSON lines") {
  const Problem p = graph_problem(fixture_g1());
  RunOptions opts;
  opts.record_pushes = true;
  const RunResult r = kld(p, opts);
  std::ostringstream out;
  write_trace_jsonl(out, r.stats, p.registry());
  std::istringstream in(out.str());
  std::string line;
  int pushes = 0, expands = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    (j["event"] == "push" ? pushes : expands)++;
    CHECK(j.contains("priority"));
  }
  CHECK(pushes == static_cast<int>(r.stats.pushes));
  CHECK(expands == 3);
}
