#include "ld/problems/grammar.hpp"

#include <algorithm>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>

#include "ld/errors.hpp"
#include "ld/problem_io.hpp"

namespace ld {

namespace {

int index_of(std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) return static_cast<int>(it - names.begin());
  names.push_back(name);
  return static_cast<int>(names.size() - 1);
}

std::optional<int> find_index(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

}  // namespace

int Grammar::nonterminal(const std::string& name) { return index_of(nonterminals, name); }
int Grammar::terminal(const std::string& token) { return index_of(terminals, token); }
std::optional<int> Grammar::find_nonterminal(const std::string& name) const { return find_index(nonterminals, name); }
std::optional<int> Grammar::find_terminal(const std::string& token) const { return find_index(terminals, token); }

Grammar read_grammar(std::istream& is) {
  Grammar g;
  std::optional<std::string> start;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    auto fail = [&](const std::string& why) {
      throw InputError("grammar line " + std::to_string(line_no) + ": " + why);
    };
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    std::string head;
    if (!(in >> head)) continue;
    if (head == "start") {
      std::string name, extra;
      if (!(in >> name) || (in >> extra)) fail("expected 'start <nonterminal>'");
      start = name;
      continue;
    }
    const auto colon = line.rfind(':');
    if (colon == std::string::npos) fail("missing ': <weight>'");
    std::istringstream body(line.substr(0, colon));
    std::istringstream weight_text(line.substr(colon + 1));
    std::string lhs, arrow, w, extra;
    if (!(body >> lhs >> arrow) || arrow != "->") fail("expected 'X -> ...'");
    if (!(weight_text >> w) || (weight_text >> extra)) fail("expected a single weight after ':'");
    Weight weight = 0;
    try {
      weight = parse_weight(w);
    } catch (const Error&) {
      fail("bad weight '" + w + "'");
    }
    if (!(weight >= 0)) fail("production weights must be non-negative");
    std::vector<std::string> rhs;
    for (std::string s; body >> s;) rhs.push_back(s);
    const int x = g.nonterminal(lhs);
    if (rhs.size() == 1 && rhs[0].size() >= 2 && rhs[0].front() == '\'' && rhs[0].back() == '\'') {
      g.lexical.push_back({x, g.terminal(rhs[0].substr(1, rhs[0].size() - 2)), weight});
    } else if (rhs.size() == 2 && rhs[0].front() != '\'' && rhs[1].front() != '\'') {
      const int y = g.nonterminal(rhs[0]);
      const int z = g.nonterminal(rhs[1]);
      g.binary.push_back({x, y, z, weight});
    } else {
      fail("productions must be 'X -> Y Z' or X -> 'token'");
    }
  }
  if (g.nonterminals.empty()) throw InputError("grammar has no productions");
  if (start) {
    auto s = g.find_nonterminal(*start);
    if (!s) throw InputError("start symbol '" + *start + "' has no productions");
    g.start = *s;
  }
  return g;
}

void write_grammar(std::ostream& os, const Grammar& g) {
  os << "start " << g.nonterminals[g.start] << '\n';
  for (const auto& b : g.binary)
    os << g.nonterminals[b.lhs] << " -> " << g.nonterminals[b.left] << ' ' << g.nonterminals[b.right] << " : "
       << format_weight(b.weight) << '\n';
  for (const auto& l : g.lexical)
    os << g.nonterminals[l.lhs] << " -> '" << g.terminals[l.terminal] << "' : " << format_weight(l.weight) << '\n';
}

std::vector<std::string> tokenize(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

namespace {

struct ParseTables {
  std::vector<std::vector<const Grammar::Binary*>> by_left;
  std::vector<std::vector<const Grammar::Binary*>> by_right;
  LabelId phrase = 0;
  std::size_t positions = 0;  // n + 2, so indexes 1..n+1 are valid
};

// Indexes derived phrases by start and end position so each binary rule is
// generated once, when the later of its two antecedents is expanded.
class ParseExpander : public Expander {
 public:
  ParseExpander(std::shared_ptr<const Grammar> g, std::shared_ptr<const ParseTables> t,
                std::shared_ptr<StatementRegistry> reg)
      : g_(std::move(g)), t_(std::move(t)), reg_(std::move(reg)), starting_(t_->positions), ending_(t_->positions) {}

  void expand(Statement b, const SolutionSet&, std::vector<Rule>& out) override {
    if (reg_->label_of(b) != t_->phrase) return;
    const int y = reg_->arg(b, 0), i = reg_->arg(b, 1), j = reg_->arg(b, 2);
    starting_[i].push_back({y, j, b});
    ending_[j].push_back({y, i, b});
    // b as the left child: phrase(y,i,j), phrase(z,j,k) -> phrase(x,i,k).
    for (const Grammar::Binary* p : t_->by_left[y])
      for (const Span& right : starting_[j])
        if (right.symbol == p->right) emit(*p, b, right.statement, i, right.other, out);
    // b as the right child: phrase(z,h,i), phrase(y,i,j) -> phrase(x,h,j).
    for (const Grammar::Binary* p : t_->by_right[y])
      for (const Span& left : ending_[i])
        if (left.symbol == p->left) emit(*p, left.statement, b, left.other, j, out);
  }

 private:
  struct Span {
    int symbol;
    int other;  // end for `starting_`, start for `ending_`
    Statement statement;
  };

  void emit(const Grammar::Binary& p, Statement left, Statement right, int from, int to, std::vector<Rule>& out) {
    const std::int32_t args[] = {p.lhs, from, to};
    Rule r = make_rule({left, right}, reg_->intern(t_->phrase, args), p.weight);
    r.tag = "binary";
    out.push_back(std::move(r));
  }

  std::shared_ptr<const Grammar> g_;
  std::shared_ptr<const ParseTables> t_;
  std::shared_ptr<StatementRegistry> reg_;
  std::vector<std::vector<Span>> starting_;
  std::vector<std::vector<Span>> ending_;
};

}  // namespace

Problem parse_problem(const Grammar& grammar, std::span<const std::string> tokens) {
  std::vector<int> ids;
  for (const std::string& tok : tokens) {
    auto id = grammar.find_terminal(tok);
    if (!id) throw InputError("unknown terminal '" + tok + "'");
    ids.push_back(*id);
  }
  auto g = std::make_shared<const Grammar>(grammar);
  auto tables = std::make_shared<ParseTables>();
  auto registry = std::make_shared<StatementRegistry>();
  tables->phrase = registry->label_id("phrase");
  tables->positions = tokens.size() + 2;
  tables->by_left.resize(g->nonterminals.size());
  tables->by_right.resize(g->nonterminals.size());
  for (const auto& b : g->binary) {
    tables->by_left[b.left].push_back(&b);
    tables->by_right[b.right].push_back(&b);
  }
  std::vector<Rule> axioms;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (const auto& l : g->lexical)
      if (l.terminal == ids[i]) {
        const std::int32_t args[] = {l.lhs, static_cast<std::int32_t>(i + 1), static_cast<std::int32_t>(i + 2)};
        axioms.push_back(make_axiom(registry->intern(tables->phrase, args), l.weight));
        axioms.back().tag = "lexical";
      }
  const std::int32_t goal_args[] = {g->start, 1, static_cast<std::int32_t>(tokens.size() + 1)};
  const Statement goal = registry->intern(tables->phrase, goal_args);
  std::shared_ptr<const ParseTables> t = tables;
  return Problem::implicit(
      registry, std::move(axioms), [g, t, registry] { return std::make_unique<ParseExpander>(g, t, registry); },
      goal);
}

}  // namespace ld
