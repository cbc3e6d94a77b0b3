#include <doctest.h>

#include <sstream>

#include "ld/derivation.hpp"
#include "ld/engine.hpp"
#include "ld/errors.hpp"
#include "ld/problem_io.hpp"
#include "ld/problem_tools.hpp"
#include "ld/problems/fixtures.hpp"
#include "support.hpp"

using namespace ld;

TEST_CASE("registry interns keys densely and round-trips text") {
  StatementRegistry reg;
  const Statement a = reg.intern("path", {3});
  const Statement b = reg.intern("phrase", {1, 2, 3});
  const Statement goal = reg.intern("goal");
  CHECK(a.id == 0);
  CHECK(b.id == 1);
  CHECK(reg.intern("path", {3}) == a);
  CHECK(reg.to_string(b) == "phrase(1,2,3)");
  CHECK(reg.to_string(goal) == "goal");
  CHECK(reg.parse("phrase(1,2,3)") == b);
  CHECK(reg.parse("goal") == goal);
  CHECK(reg.parse("neg(-4)") == reg.intern("neg", {-4}));
  CHECK(reg.size() == 4);
  const std::int32_t args[] = {1, 2, 3};
  CHECK(reg.find("phrase", args) == b);
  CHECK_FALSE(reg.find("phrase", std::span<const std::int32_t>(args, 2)).has_value());
  CHECK(reg.arg(b, 2) == 3);
}

TEST_CASE("registry rejects malformed text and too many args") {
  StatementRegistry reg;
  CHECK_THROWS_AS(reg.parse("x(1,"), InputError);
  CHECK_THROWS_AS(reg.parse("x(a)"), InputError);
  CHECK_THROWS(reg.intern("x", {1, 2, 3, 4, 5, 6, 7}));
}

TEST_CASE("weight functions") {
  const Weight ws[] = {2, 3, 5};
  CHECK(WeightFn::additive(1)(ws) == 11);
  CHECK(WeightFn::masked(1, 0b101)(ws) == 8);
  CHECK(WeightFn::general([](std::span<const Weight> w) { return w[0] * w[1]; })(ws) == 6);
  CHECK(WeightFn::additive(1).is_additive());
  CHECK(WeightFn::signed_additive(-2).is_signed());
}

TEST_CASE("problem text format round-trips exactly") {
  const Problem p = testing::random_problem(7);
  std::stringstream text;
  write_problem(text, p);
  const Problem q = read_problem(text);
  REQUIRE(q.rules().size() == p.rules().size());
  CHECK(q.registry().to_string(q.goal()) == p.registry().to_string(p.goal()));
  const SolutionSet a = dp_acyclic(p), b = dp_acyclic(q);
  for (const auto& e : a.entries()) {
    const Statement s = q.registry().parse(p.registry().to_string(e.statement));
    CHECK(b.weight_of(s) == e.weight);
  }
}

TEST_CASE("weights format to the shortest exact text") {
  CHECK(format_weight(0.1) == "0.1");
  CHECK(format_weight(kInfinity) == "inf");
  CHECK(parse_weight(format_weight(1.0 / 3)) == 1.0 / 3);
  CHECK(parse_weight("inf") == kInfinity);
  CHECK_THROWS_AS(parse_weight("abc"), InputError);
}

TEST_CASE("read_problem reports the offending line") {
  std::istringstream text("goal g\nrule x g <- a\n");
  CHECK_THROWS_WITH_AS(read_problem(text), doctest::Contains("line 2"), InputError);
}

TEST_CASE("validate_problem flags negative and non-monotone weights") {
  auto reg = std::make_shared<StatementRegistry>();
  const Statement a = reg->intern("a"), b = reg->intern("b");
  std::vector<Rule> rules{make_axiom(a, -1), make_rule({a}, b, 1)};
  Rule decreasing;
  decreasing.antecedents.push_back(a);
  decreasing.conclusion = b;
  decreasing.weight = WeightFn::general([](std::span<const Weight> w) { return 10 - w[0]; });
  rules.push_back(decreasing);
  const ProblemReport report = validate_problem(Problem::grounded(reg, rules, b));
  REQUIRE(report.issues.size() == 2);
  CHECK(report.issues[0].kind == ProblemIssue::Kind::kNegativeWeight);
  CHECK(report.issues[1].kind == ProblemIssue::Kind::kNonMonotoneWeight);

  std::vector<Rule> ok{make_axiom(a, 0), make_rule({a}, b, 1)};
  CHECK(validate_problem(Problem::grounded(reg, ok, b)).ok());
}

TEST_CASE("ground reproduces an implicit problem's closure") {
  const Problem parse = parse_problem(fixture_cfg1(), fixture_cfg1_tokens());
  const Problem g = ground(parse, 1000);
  CHECK(g.is_grounded());
  CHECK(kld(g).solution.goal_weight == kld(parse).solution.goal_weight);
  CHECK_THROWS_WITH_AS(ground(parse, 1), doctest::Contains("frontier size"), BudgetExceeded);
}

TEST_CASE("derivations evaluate to their recorded weight") {
  const Problem p = graph_problem(fixture_g1());
  const RunResult r = kld(p);
  const Derivation d = get_derivation(r.solution, p.goal());
  CHECK(eval_derivation(d) == 3);
  CHECK(d.size() == 3);
  CHECK(d.depth() == 2);

  Derivation broken = d;
  broken.children[0].rule.conclusion = p.goal();
  CHECK_THROWS_AS(eval_derivation(broken), MalformedDerivation);
  CHECK_THROWS_AS(get_derivation(r.solution, p.registry().intern("path", {99})), NotDerived);
}
