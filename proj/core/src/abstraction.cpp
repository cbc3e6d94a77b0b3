#include "ld/abstraction.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ld/errors.hpp"
#include "ld/problem_io.hpp"
#include "ld/problem_tools.hpp"

namespace ld {
namespace {

struct RuleShapeHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint32_t x : v) {
      h ^= x;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

bool has_signed_rules(const Problem& p) {
  if (!p.is_grounded()) return false;
  for (const Rule& r : p.rules())
    if (r.weight.is_signed()) return true;
  return false;
}

}  // namespace

ContextProblem context_problem(const Problem& p) {
  const auto& base_rules = p.rules();
  for (const Rule& r : base_rules)
    if (!r.weight.is_additive() || !r.weight.counts_all())
      throw UnsupportedWeightFn("contexts are defined for additive rules only");

  auto registry = std::make_shared<StatementRegistry>(p.registry());
  ContextProblem cp;
  cp.base_size = registry->size();
  cp.context_of.resize(cp.base_size);
  for (std::uint32_t id = 0; id < cp.base_size; ++id) {
    const Statement s{id};
    std::string label(kContextPrefix);
    label += registry->label(s);
    std::vector<std::int32_t> args(registry->args(s).begin(), registry->args(s).end());
    cp.context_of[id] = registry->intern(label, args);
  }

  std::vector<Rule> rules = base_rules;
  rules.push_back(make_axiom(cp.context(p.goal()), 0));
  for (const Rule& r : base_rules) {
    for (std::size_t i = 0; i < r.arity(); ++i) {
      Rule c;
      c.antecedents.push_back(cp.context(r.conclusion));
      for (std::size_t j = 0; j < r.arity(); ++j)
        if (j != i) c.antecedents.push_back(r.antecedents[j]);
      c.conclusion = cp.context(r.antecedents[i]);
      c.weight = r.weight;
      c.tag = r.tag;
      rules.push_back(std::move(c));
    }
  }
  cp.problem = Problem::grounded(std::move(registry), std::move(rules), p.goal());
  cp.problem.set_max_arity(p.max_arity());
  return cp;
}

AbstractionMap AbstractionMap::from_keys(std::shared_ptr<StatementRegistry> source,
                                         std::shared_ptr<StatementRegistry> target, KeyFn key_fn) {
  StatementRegistry* src = source.get();
  StatementRegistry* dst = target.get();
  return AbstractionMap(target, [source, target, src, dst, key_fn = std::move(key_fn)](Statement s) {
    return key_fn(*src, s, *dst);
  });
}

AbstractionMap AbstractionMap::identity(std::shared_ptr<StatementRegistry> registry) {
  return AbstractionMap(std::move(registry), [](Statement s) { return s; });
}

AbstractionMap compose(const AbstractionMap& first, const AbstractionMap& second) {
  return AbstractionMap(second.target_, [a = first.fn_, b = second.fn_](Statement s) { return b(a(s)); });
}

Problem project(const Problem& p, const AbstractionMap& m) {
  std::vector<Rule> out;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, RuleShapeHash> index;
  std::vector<std::uint32_t> key;
  for (const Rule& r : p.rules()) {
    if (!r.weight.is_additive() || !r.weight.counts_all())
      throw UnsupportedWeightFn("projection requires additive rules");
    Rule a;
    key.clear();
    for (Statement s : r.antecedents) {
      Statement t = m(s);
      a.antecedents.push_back(t);
      key.push_back(t.id);
    }
    a.conclusion = m(r.conclusion);
    key.push_back(a.conclusion.id);
    key.push_back(static_cast<std::uint32_t>(r.arity()));
    auto [it, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      a.weight = r.weight;
      a.tag = r.tag;
      out.push_back(std::move(a));
      continue;
    }
    Rule& kept = out[it->second];
    const Weight v = std::min(kept.weight.constant(), r.weight.constant());
    const bool is_signed = kept.weight.is_signed() || r.weight.is_signed();
    kept.weight = is_signed ? WeightFn::signed_additive(v) : WeightFn::additive(v);
  }
  Problem abstract = Problem::grounded(m.target_ptr(), std::move(out), m(p.goal()));
  abstract.set_goal_priority_offset(p.goal_priority_offset());
  abstract.set_max_arity(p.max_arity());
  return abstract;
}

void PatternDatabase::set(Statement abstract, Weight w) {
  if (abstract.id >= weights_.size()) weights_.resize(abstract.id + 1, kInfinity);
  if (weights_[abstract.id] == kInfinity && w != kInfinity) ++count_;
  if (weights_[abstract.id] != kInfinity && w == kInfinity) --count_;
  weights_[abstract.id] = w;
}

std::vector<std::pair<Statement, Weight>> PatternDatabase::entries() const {
  std::vector<std::pair<Statement, Weight>> out;
  for (std::uint32_t id = 0; id < weights_.size(); ++id)
    if (weights_[id] != kInfinity) out.emplace_back(Statement{id}, weights_[id]);
  return out;
}

void PatternDatabase::write(std::ostream& os) const {
  for (auto [s, w] : entries()) os << "pdb " << registry_->to_string(s) << ' ' << format_weight(w) << '\n';
}

PatternDatabase PatternDatabase::read(std::istream& is, std::shared_ptr<StatementRegistry> registry) {
  PatternDatabase db(registry);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream in(line);
    std::string head, stmt, w;
    if (!(in >> head) || head[0] == '#') continue;
    if (head != "pdb" || !(in >> stmt >> w))
      throw InputError("line " + std::to_string(line_no) + ": expected 'pdb <statement> <weight>'");
    db.set(registry->parse(stmt), parse_weight(w));
  }
  return db;
}

SolutionSet closure_weights(const Problem& p) {
  if (has_signed_rules(p) && p.goal_priority_offset() == 0) return dp_acyclic(p);
  RunOptions opts;
  opts.stop = StopCondition::kQueueEmpty;
  return kld(p, opts).solution;
}

PatternDatabase build_pdb(const Problem& abstract_problem) {
  ContextProblem cp = context_problem(abstract_problem);
  SolutionSet solved;
  if (has_signed_rules(abstract_problem)) {
    solved = dp_acyclic(cp.problem);
  } else {
    RunOptions opts;
    opts.stop = StopCondition::kQueueEmpty;
    solved = kld(cp.problem, opts).solution;
  }
  PatternDatabase db(abstract_problem.registry_ptr());
  for (std::uint32_t id = 0; id < cp.base_size; ++id) {
    if (auto w = solved.weight_of(cp.context_of[id])) db.set(Statement{id}, *w);
  }
  return db;
}

Heuristic pdb_heuristic(std::shared_ptr<const PatternDatabase> db, AbstractionMap m, AbsentEntry absent) {
  const Weight fallback = absent == AbsentEntry::kPrune ? kInfinity : 0.0;
  return [db = std::move(db), m = std::move(m), fallback](Statement s) {
    const Weight w = db->lookup(m(s));
    return w == kInfinity ? fallback : w;
  };
}

MonotoneReport check_monotone(const Problem& p, const Heuristic& h, const SolutionSet& closure,
                              std::size_t sample_budget, double tolerance) {
  MonotoneReport report;
  SolutionSet replay(p.registry_ptr());
  auto expander = p.make_expander();
  std::vector<Rule> fired;
  std::vector<Weight> ws;
  for (const auto& e : closure.entries()) {
    replay.insert(e.statement, e.weight, Rule{});
    fired.clear();
    expander->expand(e.statement, replay, fired);
    for (const Rule& r : fired) {
      if (report.rules_checked == sample_budget) return report;
      ++report.rules_checked;
      ws.clear();
      for (Statement a : r.antecedents) ws.push_back(*replay.weight_of(a));
      const Weight rhs = r.evaluate(ws) + h(r.conclusion);
      if (rhs == kInfinity) continue;
      for (std::size_t i = 0; i < r.arity(); ++i) {
        const Weight lhs = ws[i] + h(r.antecedents[i]);
        const Weight slack = tolerance * std::max<Weight>(1, std::abs(rhs));
        if (lhs > rhs + slack) report.violations.push_back({r, i, lhs, rhs});
      }
    }
  }
  return report;
}

MonotoneReport check_monotone(const Problem& p, const Heuristic& h, std::size_t sample_budget, double tolerance) {
  return check_monotone(p, h, closure_weights(p), sample_budget, tolerance);
}

}  // namespace ld
