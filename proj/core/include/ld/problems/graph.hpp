#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ld/problem.hpp"

namespace ld {

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Weight weight = 0;
};

/// Directed graph with non-negative edge weights and a source/target pair.
struct Graph {
  std::uint32_t nodes = 0;
  std::vector<Edge> edges;
  std::uint32_t source = 0;
  std::uint32_t target = 0;
  /// Optional display names, indexed by node.
  std::vector<std::string> names;

  /// Throws InputError on bad node references or negative weights.
  void validate() const;
};

/// Axiom `-> path(s)` with weight 0 and one rule `path(x) ->_w path(y)` per
/// edge; the goal is `path(t)`. Statement `path(i)` refers to node i.
Problem graph_problem(const Graph& g);

/// Edge-list text: `source <node>`, `target <node>`, `edge <from> <to> <w>`
/// and `node <name>` lines; `#` starts a comment. Nodes are numbered in order
/// of first mention.
Graph read_graph(std::istream& is);
void write_graph(std::ostream& os, const Graph& g);

}  // namespace ld
