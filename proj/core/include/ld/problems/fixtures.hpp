#pragma once

#include <string>
#include <vector>

#include "ld/hald.hpp"
#include "ld/problems/grammar.hpp"
#include "ld/problems/graph.hpp"

namespace ld {

/// Nodes s, a, b with edges s->a (1), a->b (2), s->b (5); source s, target b.
Graph fixture_g1();

/// S -> A B (0.5), A -> 'a' (0.1), B -> 'b' (0.2); parse "a b".
Grammar fixture_cfg1();
std::vector<std::string> fixture_cfg1_tokens();

/// Two-level hierarchy. Level 0 has axioms ->_i X(i), ->_i Y(i),
/// X(i),Y(j) ->_{ij} goal0, X(i),Y(i) ->_5 Z(i), Z(i) ->_i goal0 for
/// i, j in 1..n; level 1 collapses the index: ->_1 X, ->_1 Y,
/// X,Y ->_1 goal1, X,Y ->_5 Z, Z ->_1 goal1.
Hierarchy fixture_h1(int n = 2);

}  // namespace ld
