#include "ld/problems/graph.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ld/errors.hpp"
#include "ld/problem_io.hpp"

namespace ld {

void Graph::validate() const {
  if (source >= nodes || target >= nodes) throw InputError("graph: source or target is not a node");
  for (const Edge& e : edges) {
    if (e.from >= nodes || e.to >= nodes) throw InputError("graph: edge refers to an unknown node");
    if (!(e.weight >= 0)) throw InputError("graph: edge weights must be non-negative");
  }
}

Problem graph_problem(const Graph& g) {
  g.validate();
  auto registry = std::make_shared<StatementRegistry>();
  const LabelId path = registry->label_id("path");
  std::vector<Statement> node(g.nodes);
  for (std::uint32_t i = 0; i < g.nodes; ++i) {
    const std::int32_t arg = static_cast<std::int32_t>(i);
    node[i] = registry->intern(path, std::span<const std::int32_t>(&arg, 1));
  }
  std::vector<Rule> rules;
  rules.reserve(g.edges.size() + 1);
  rules.push_back(make_axiom(node[g.source], 0));
  rules.back().tag = "start";
  for (const Edge& e : g.edges) {
    rules.push_back(make_rule({node[e.from]}, node[e.to], e.weight));
    rules.back().tag = "edge";
  }
  return Problem::grounded(std::move(registry), std::move(rules), node[g.target]);
}

Graph read_graph(std::istream& is) {
  Graph g;
  std::unordered_map<std::string, std::uint32_t> ids;
  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = ids.try_emplace(name, g.nodes);
    if (inserted) {
      ++g.nodes;
      g.names.push_back(name);
    }
    return it->second;
  };
  bool has_source = false, has_target = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string kind;
    if (!(in >> kind)) continue;
    auto fail = [&](const std::string& why) {
      throw InputError("graph line " + std::to_string(line_no) + ": " + why);
    };
    std::string a, b, w, extra;
    if (kind == "source" || kind == "target" || kind == "node") {
      if (!(in >> a) || (in >> extra)) fail("expected '" + kind + " <node>'");
      const std::uint32_t id = id_of(a);
      if (kind == "source") g.source = id, has_source = true;
      if (kind == "target") g.target = id, has_target = true;
    } else if (kind == "edge") {
      if (!(in >> a >> b >> w) || (in >> extra)) fail("expected 'edge <from> <to> <weight>'");
      Weight weight = 0;
      try {
        weight = parse_weight(w);
      } catch (const Error&) {
        fail("bad weight '" + w + "'");
      }
      g.edges.push_back({id_of(a), id_of(b), weight});
    } else {
      fail("unknown directive '" + kind + "'");
    }
  }
  if (!has_source || !has_target) throw InputError("graph: missing source or target line");
  g.validate();
  return g;
}

void write_graph(std::ostream& os, const Graph& g) {
  auto name = [&](std::uint32_t i) { return i < g.names.size() ? g.names[i] : std::to_string(i); };
  for (std::uint32_t i = 0; i < g.nodes; ++i) os << "node " << name(i) << '\n';
  os << "source " << name(g.source) << '\n' << "target " << name(g.target) << '\n';
  for (const Edge& e : g.edges) os << "edge " << name(e.from) << ' ' << name(e.to) << ' ' << format_weight(e.weight) << '\n';
}

}  // namespace ld
