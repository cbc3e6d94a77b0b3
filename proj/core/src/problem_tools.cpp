#include "ld/problem_tools.hpp"

#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "ld/errors.hpp"

namespace ld {
namespace {

// Breadth-first forward closure ignoring weights. `visit` receives each rule
// instance once and returns false to stop early.
template <typename Visit>
void forward_closure(const Problem& p, std::size_t statement_budget, Visit&& visit) {
  SolutionSet reached(p.registry_ptr());
  std::deque<Statement> frontier;
  auto reach = [&](const Rule& r) {
    if (reached.insert(r.conclusion, 0, Rule{})) {
      if (reached.size() > statement_budget) {
        std::ostringstream msg;
        msg << "grounding exceeded the budget of " << statement_budget << " statements (frontier size "
            << frontier.size() << ")";
        throw BudgetExceeded(msg.str());
      }
      frontier.push_back(r.conclusion);
    }
  };
  for (const Rule& r : p.axioms()) {
    if (!visit(r)) return;
    reach(r);
  }
  auto expander = p.make_expander();
  std::vector<Rule> out;
  while (!frontier.empty()) {
    Statement b = frontier.front();
    frontier.pop_front();
    out.clear();
    expander->expand(b, reached, out);
    for (const Rule& r : out) {
      if (!visit(r)) return;
      reach(r);
    }
  }
}

void check_rule(const Rule& r, std::size_t max_arity, std::size_t samples, std::mt19937_64& rng,
                ProblemReport& report) {
  ++report.rules_checked;
  if (r.arity() > max_arity) {
    report.issues.push_back({ProblemIssue::Kind::kArityExceeded, r,
                             "arity " + std::to_string(r.arity()) + " exceeds " + std::to_string(max_arity)});
  }
  if (r.weight.is_additive()) {
    if (r.weight.constant() < 0 && !r.weight.is_signed()) {
      std::ostringstream msg;
      msg << "negative additive weight " << r.weight.constant() << " on a rule not flagged signed";
      report.issues.push_back({ProblemIssue::Kind::kNegativeWeight, r, msg.str()});
    }
    return;
  }
  std::uniform_real_distribution<double> base(0.0, 100.0);
  std::uniform_real_distribution<double> step(1e-3, 10.0);
  std::vector<Weight> ws(r.arity());
  for (std::size_t s = 0; s < samples; ++s) {
    for (Weight& w : ws) w = base(rng);
    const Weight before = r.evaluate(ws);
    // Axioms are constants; sample the call anyway so it is exercised.
    for (std::size_t i = 0; i < ws.size(); ++i) {
      std::vector<Weight> raised = ws;
      raised[i] += step(rng);
      const Weight after = r.evaluate(raised);
      if (after < before) {
        std::ostringstream msg;
        msg << "raising argument " << i << " from " << ws[i] << " to " << raised[i] << " lowered the weight from "
            << before << " to " << after;
        report.issues.push_back({ProblemIssue::Kind::kNonMonotoneWeight, r, msg.str()});
        return;
      }
    }
  }
}

}  // namespace

ProblemReport validate_problem(const Problem& p, std::size_t samples, std::uint64_t seed) {
  ProblemReport report;
  std::mt19937_64 rng(seed);
  if (p.is_grounded()) {
    for (const Rule& r : p.rules()) check_rule(r, p.max_arity(), samples, rng, report);
    return report;
  }
  std::size_t budget = samples;
  forward_closure(p, std::numeric_limits<std::size_t>::max(), [&](const Rule& r) {
    check_rule(r, p.max_arity(), samples, rng, report);
    return --budget > 0;
  });
  return report;
}

Problem ground(const Problem& p, std::size_t statement_budget) {
  std::vector<Rule> rules;
  forward_closure(p, statement_budget, [&](const Rule& r) {
    rules.push_back(r);
    return true;
  });
  Problem g = Problem::grounded(p.registry_ptr(), std::move(rules), p.goal());
  g.set_goal_priority_offset(p.goal_priority_offset());
  g.set_max_arity(p.max_arity());
  return g;
}

}  // namespace ld
