#include "ld/problems/fixtures.hpp"

#include <memory>
#include <unordered_map>

namespace ld {

Graph fixture_g1() {
  Graph g;
  g.nodes = 3;
  g.names = {"s", "a", "b"};
  g.edges = {{0, 1, 1}, {1, 2, 2}, {0, 2, 5}};
  g.source = 0;
  g.target = 2;
  return g;
}

Grammar fixture_cfg1() {
  Grammar g;
  const int s = g.nonterminal("S"), a = g.nonterminal("A"), b = g.nonterminal("B");
  g.binary.push_back({s, a, b, 0.5});
  g.lexical.push_back({a, g.terminal("a"), 0.1});
  g.lexical.push_back({b, g.terminal("b"), 0.2});
  g.start = s;
  return g;
}

std::vector<std::string> fixture_cfg1_tokens() { return {"a", "b"}; }

Hierarchy fixture_h1(int n) {
  auto top = std::make_shared<StatementRegistry>();
  const Statement X = top->intern("X"), Y = top->intern("Y"), Z = top->intern("Z"), goal1 = top->intern("goal1");
  std::vector<Rule> r1 = {make_axiom(X, 1), make_axiom(Y, 1), make_rule({X, Y}, goal1, 1), make_rule({X, Y}, Z, 5),
                          make_rule({Z}, goal1, 1)};

  auto base = std::make_shared<StatementRegistry>();
  std::unordered_map<std::uint32_t, Statement> up;
  const Statement goal0 = base->intern("goal0");
  up[goal0.id] = goal1;
  std::vector<Statement> xs, ys;
  std::vector<Rule> r0;
  for (int i = 1; i <= n; ++i) {
    xs.push_back(base->intern("X", {i}));
    ys.push_back(base->intern("Y", {i}));
    up[xs.back().id] = X;
    up[ys.back().id] = Y;
  }
  for (int i = 1; i <= n; ++i) {
    r0.push_back(make_axiom(xs[i - 1], i));
    r0.push_back(make_axiom(ys[i - 1], i));
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) r0.push_back(make_rule({xs[i - 1], ys[j - 1]}, goal0, i * j));
  for (int i = 1; i <= n; ++i) {
    const Statement z = base->intern("Z", {i});
    up[z.id] = Z;
    r0.push_back(make_rule({xs[i - 1], ys[i - 1]}, z, 5));
    r0.push_back(make_rule({z}, goal0, i));
  }

  AbstractionMap map(top, [up = std::move(up)](Statement s) { return up.at(s.id); });
  std::vector<Problem> problems;
  problems.push_back(Problem::grounded(base, std::move(r0), goal0));
  problems.push_back(Problem::grounded(top, std::move(r1), goal1));
  return make_grounded_hierarchy(std::move(problems), {map});
}

}  // namespace ld
