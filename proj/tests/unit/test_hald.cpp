#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "ld/errors.hpp"
#include "ld/hald.hpp"
#include "ld/problem_tools.hpp"
#include "ld/problems/fixtures.hpp"
#include "support.hpp"

using namespace ld;

namespace {

std::vector<std::string> expansion_names(const HaldResult& r, const Hierarchy& h) {
  std::vector<std::string> out;
  for (const TraceRecord& t : r.stats.expansion_order) out.push_back(describe(r.decode(t.statement), h));
  return out;
}

const TraceRecord* find_expansion(const HaldResult& r, const Hierarchy& h, const std::string& name) {
  for (const TraceRecord& t : r.stats.expansion_order)
    if (describe(r.decode(t.statement), h) == name) return &t;
  return nullptr;
}

}  // namespace

TEST_CASE("golden trace of the two-level example") {
  const Hierarchy h = fixture_h1();
  HaldOptions opts;
  opts.record_pushes = true;
  const HaldResult r = run_hald(h, opts);
  REQUIRE(r.goal_derived);
  CHECK(r.goal_weight == 3);
  const std::vector<std::string> expected = {"⊥",        "context(⊥)", "X",    "Y",    "goal1",    "context(goal1)",
                                             "context(X)", "context(Y)", "X(1)", "Y(1)", "goal0"};
  CHECK(expansion_names(r, h) == expected);

  const TraceRecord* goal1 = find_expansion(r, h, "goal1");
  REQUIRE(goal1);
  CHECK(goal1->weight == 3);
  CHECK(goal1->priority == 3);
  for (const char* name : {"context(X)", "context(Y)"}) {
    const TraceRecord* t = find_expansion(r, h, name);
    REQUIRE(t);
    CHECK(t->weight == 2);
    CHECK(t->priority == 3);
  }
  bool z_pushed = false;
  for (const TraceRecord& t : r.stats.pushes_log) {
    const std::string name = describe(r.decode(t.statement), h);
    if (name == "Z") {
      z_pushed = true;
      CHECK(t.weight == 7);
      CHECK(t.priority == 7);
    }
    CHECK(name != "context(Z)");
  }
  CHECK(z_pushed);
  CHECK(find_expansion(r, h, "Z") == nullptr);

  REQUIRE(r.goal_derivation);
  CHECK(eval_derivation(*r.goal_derivation) == 3);
  CHECK(h.level(0).registry().to_string(r.goal_derivation->conclusion()) == "goal0");
}

TEST_CASE("expansions stay within twice the intrinsic count") {
  for (int n = 1; n <= 5; ++n) {
    CAPTURE(n);
    const Hierarchy h = fixture_h1(n);
    const HaldResult r = run_hald(h);
    const std::size_t K = count_K(h);
    CHECK(r.total_expansions <= 2 * K);
    CHECK(r.goal_weight == 3);
  }
  CHECK(count_K(fixture_h1()) == 7);
}

TEST_CASE("random three-level hierarchies") {
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    CAPTURE(seed);
    const Hierarchy h = testing::random_hierarchy(seed);
    REQUIRE(validate_hierarchy(h).ok());
    const SolutionSet oracle = closure_weights(h.level(0).problem());
    const auto expected = oracle.weight_of(h.level(0).goal());
    const HaldResult r = run_hald(h);
    CHECK(r.goal_derived == expected.has_value());
    if (!expected) continue;
    ++solved;
    CHECK(r.goal_weight == *expected);
    CHECK(eval_derivation(*r.goal_derivation) == *expected);
    CHECK(r.total_expansions <= 2 * count_K(h));
  }
  CHECK(solved >= 20);
}

TEST_CASE("validate_hierarchy finds a heavier counterpart") {
  const Hierarchy good = fixture_h1();
  CHECK(validate_hierarchy(good).ok());

  std::stringstream text;
  write_hierarchy(text, good);
  std::string s = text.str();
  const std::string from = "rule 1 goal1 <- X Y";
  REQUIRE(s.find(from) != std::string::npos);
  s.replace(s.find(from), from.size(), "rule 5 goal1 <- X Y");
  std::istringstream in(s);
  const HierarchyReport report = validate_hierarchy(read_hierarchy(in));
  REQUIRE_FALSE(report.ok());
  bool heavier = false;
  for (const auto& issue : report.issues)
    heavier = heavier || (issue.kind == HierarchyIssue::Kind::kHeavierCounterpart &&
                          issue.detail.find("X(1) Y(1) ->1 goal0") != std::string::npos);
  CHECK(heavier);
}

TEST_CASE("validate_hierarchy finds a missing counterpart and a non-onto map") {
  std::istringstream in(
      "level\ngoal g\nrule 1 a <-\nrule 1 g <- a\nmap a A\nmap g G\n"
      "level\ngoal G\nrule 1 A <-\nrule 0 W <-\n");
  const HierarchyReport report = validate_hierarchy(read_hierarchy(in));
  bool missing = false, onto = false;
  for (const auto& issue : report.issues) {
    missing = missing || issue.kind == HierarchyIssue::Kind::kMissingCounterpart;
    onto = onto || issue.kind == HierarchyIssue::Kind::kNotOnto;
  }
  CHECK(missing);
  CHECK(onto);
}

TEST_CASE("a single-level hierarchy validates and matches KLD") {
  const Problem p = graph_problem(fixture_g1());
  const Hierarchy h = make_grounded_hierarchy({p}, {});
  CHECK(validate_hierarchy(h).ok());
  const HaldResult r = run_hald(h);
  const RunResult k = kld(p);
  REQUIRE(r.stats.expansion_order.size() == k.stats.expansion_order.size() + 2);
  // ⊥ and context(⊥) first, then the level-0 expansions in KLD order.
  for (std::size_t i = 0; i < k.stats.expansion_order.size(); ++i) {
    const auto& g = r.decode(r.stats.expansion_order[i + 2].statement);
    CHECK(g.level == 0);
    CHECK(g.base == k.stats.expansion_order[i].statement);
    CHECK(r.stats.expansion_order[i + 2].weight == k.stats.expansion_order[i].weight);
  }
}

TEST_CASE("hierarchy text round-trips") {
  const Hierarchy h = fixture_h1(3);
  std::stringstream text;
  write_hierarchy(text, h);
  const Hierarchy back = read_hierarchy(text);
  CHECK(run_hald(back).goal_weight == run_hald(h).goal_weight);
  std::istringstream bad("goal g\n");
  CHECK_THROWS_AS(read_hierarchy(bad), InputError);
}

TEST_CASE("level pattern databases are admissible") {
  const Hierarchy h = fixture_h1(3);
  const Problem base = h.level(0).problem();
  for (std::size_t k = 0; k < h.size(); ++k) {
    const LevelPdb pdb = level_pdb(h, k);
    CHECK(check_monotone(base, pdb.heuristic).ok());
    CHECK(*astar_ld(base, pdb.heuristic).solution.goal_weight == 3);
  }
}

TEST_CASE("hald traces are JSON lines with levels") {
  const Hierarchy h = fixture_h1();
  HaldOptions opts;
  opts.record_pushes = true;
  const HaldResult r = run_hald(h, opts);
  std::ostringstream out;
  write_hald_trace_jsonl(out, r, h);
  std::istringstream in(out.str());
  std::string line;
  std::size_t expands = 0;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    if (j["event"] == "expand") ++expands;
    CHECK(j["level"].get<int>() <= 2);
  }
  CHECK(expands == r.total_expansions);
}
