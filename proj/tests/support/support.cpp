#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>

namespace ld::testing {

namespace {

int uniform(std::mt19937_64& gen, int lo, int hi) {
  return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

Problem random_problem(std::uint64_t seed, const RandomProblemOptions& options) {
  std::mt19937_64 gen(seed * 0x9e3779b97f4a7c15ull + 17);
  auto registry = std::make_shared<StatementRegistry>();
  const int n = uniform(gen, 3, options.max_statements);
  std::vector<Statement> s;
  for (int i = 0; i < n; ++i) s.push_back(registry->intern("s", {i}));
  std::vector<Rule> rules;
  const int axioms = uniform(gen, 1, 3);
  for (int i = 0; i < axioms; ++i) rules.push_back(make_axiom(s[uniform(gen, 0, n / 2)], uniform(gen, 0, options.max_weight)));
  const int total = uniform(gen, axioms + 1, options.max_rules);
  while (static_cast<int>(rules.size()) < total) {
    const int c = uniform(gen, 1, n - 1);
    const int arity = uniform(gen, 1, options.max_arity);
    Rule r;
    for (int j = 0; j < arity; ++j) r.antecedents.push_back(s[uniform(gen, 0, options.acyclic ? c - 1 : n - 1)]);
    r.conclusion = s[c];
    r.weight = WeightFn::additive(uniform(gen, 0, options.max_weight));
    rules.push_back(r);
  }
  return Problem::grounded(registry, std::move(rules), s[n - 1]);
}

AbstractionMap random_onto_map(const Problem& p, int size, std::uint64_t seed) {
  std::mt19937_64 gen(seed * 0xbf58476d1ce4e5b9ull + 3);
  auto target = std::make_shared<StatementRegistry>();
  const int n = static_cast<int>(p.registry().size());
  size = std::clamp(size, 1, n);
  std::vector<int> image(static_cast<std::size_t>(n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  for (int i = 0; i < n; ++i) image[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i < size ? i : uniform(gen, 0, size - 1);
  std::vector<Statement> t;
  for (int j = 0; j < size; ++j) t.push_back(target->intern("t", {j}));
  return AbstractionMap(target, [image, t](Statement s) { return t[static_cast<std::size_t>(image[s.id])]; });
}

Problem loosen(const Problem& abstract, std::uint64_t seed) {
  std::mt19937_64 gen(seed + 101);
  std::vector<Rule> rules = abstract.rules();
  for (Rule& r : rules) {
    const int v = static_cast<int>(r.weight.constant());
    r.weight = WeightFn::additive(v - uniform(gen, 0, v));
  }
  return Problem::grounded(abstract.registry_ptr(), std::move(rules), abstract.goal());
}

Hierarchy random_hierarchy(std::uint64_t seed, int levels) {
  RandomProblemOptions options;
  options.acyclic = false;
  options.max_statements = 12;
  options.max_rules = 30;
  std::vector<Problem> problems{random_problem(seed, options)};
  std::vector<AbstractionMap> maps;
  for (int k = 1; k < levels; ++k) {
    const Problem& below = problems.back();
    const int size = std::max(1, static_cast<int>(below.registry().size()) / 2);
    AbstractionMap m = random_onto_map(below, size, seed * 31 + static_cast<std::uint64_t>(k));
    problems.push_back(loosen(project(below, m), seed * 7 + static_cast<std::uint64_t>(k)));
    maps.push_back(m);
  }
  return make_grounded_hierarchy(std::move(problems), std::move(maps));
}

std::vector<Weight> dijkstra(const Graph& g) {
  std::vector<Weight> dist(g.nodes, kInfinity);
  std::vector<std::vector<std::pair<std::uint32_t, Weight>>> adj(g.nodes);
  for (const Edge& e : g.edges) adj[e.from].emplace_back(e.to, e.weight);
  using Item = std::pair<Weight, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[g.source] = 0;
  pq.push({0, g.source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (auto [v, w] : adj[u])
      if (d + w < dist[v]) {
        dist[v] = d + w;
        pq.push({dist[v], v});
      }
  }
  return dist;
}

std::optional<Weight> cky(const Grammar& g, std::span<const std::string> tokens) {
  const std::size_t n = tokens.size();
  const std::size_t m = g.nonterminals.size();
  if (n == 0) return std::nullopt;
  // best[(i * (n + 1) + j) * m + X] for span [i, j)
  std::vector<Weight> best((n + 1) * (n + 1) * m, kInfinity);
  auto at = [&](std::size_t i, std::size_t j, int x) -> Weight& { return best[(i * (n + 1) + j) * m + static_cast<std::size_t>(x)]; };
  for (std::size_t i = 0; i < n; ++i) {
    auto t = g.find_terminal(tokens[i]);
    if (!t) return std::nullopt;
    for (const auto& l : g.lexical)
      if (l.terminal == *t) at(i, i + 1, l.lhs) = std::min(at(i, i + 1, l.lhs), l.weight);
  }
  for (std::size_t len = 2; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i)
      for (std::size_t k = i + 1; k < i + len; ++k)
        for (const auto& b : g.binary) {
          const Weight left = at(i, k, b.left), right = at(k, i + len, b.right);
          if (left == kInfinity || right == kInfinity) continue;
          at(i, i + len, b.lhs) = std::min(at(i, i + len, b.lhs), b.weight + left + right);
        }
  const Weight w = at(0, n, g.start);
  if (w == kInfinity) return std::nullopt;
  return w;
}

Grammar random_grammar(std::uint64_t seed, int nonterminals) {
  std::mt19937_64 gen(seed * 0x94d049bb133111ebull + 5);
  Grammar g;
  for (int i = 0; i < nonterminals; ++i) g.nonterminal("N" + std::to_string(i));
  for (const char* t : {"a", "b", "c"}) g.terminal(t);
  for (int x = 0; x < nonterminals; ++x) {
    for (int t = 0; t < 3; ++t)
      if (gen() % 2) g.lexical.push_back({x, t, static_cast<Weight>(uniform(gen, 0, 10)) / 4});
    for (int k = 0; k < 3; ++k)
      g.binary.push_back({x, uniform(gen, 0, nonterminals - 1), uniform(gen, 0, nonterminals - 1),
                          static_cast<Weight>(uniform(gen, 0, 10)) / 4});
  }
  g.start = 0;
  return g;
}

}  // namespace ld::testing
