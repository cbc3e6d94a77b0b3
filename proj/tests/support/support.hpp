#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ld/abstraction.hpp"
#include "ld/hald.hpp"
#include "ld/problem.hpp"
#include "ld/problems/grammar.hpp"
#include "ld/problems/graph.hpp"

namespace ld::testing {

struct RandomProblemOptions {
  int max_statements = 12;
  int max_rules = 30;
  int max_weight = 10;
  int max_arity = 2;
  /// Antecedents only from lower-numbered statements.
  bool acyclic = true;
};

/// Statements `s(0..n-1)` with integer-weight additive rules and goal `s(n-1)`.
Problem random_problem(std::uint64_t seed, const RandomProblemOptions& options = {});

/// Onto map from the statements of `p` to `t(0..size-1)` in a fresh registry.
AbstractionMap random_onto_map(const Problem& p, int size, std::uint64_t seed);

/// Projection with every abstract constant lowered by a random integer amount.
Problem loosen(const Problem& abstract, std::uint64_t seed);

/// Random hierarchy of `levels` grounded levels built by projecting a random
/// level-0 problem (cycles allowed) through random onto maps.
Hierarchy random_hierarchy(std::uint64_t seed, int levels = 3);

/// Single-source shortest path distances (textbook Dijkstra).
std::vector<Weight> dijkstra(const Graph& g);

/// Exhaustive CKY; sums in the same order as the engine's rules.
std::optional<Weight> cky(const Grammar& g, std::span<const std::string> tokens);

/// Random CNF grammar over terminals {a, b, c} with nonterminals N0..N{n-1}.
Grammar random_grammar(std::uint64_t seed, int nonterminals = 4);

}  // namespace ld::testing
