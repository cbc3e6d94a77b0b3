#include "ld/problem.hpp"

#include <algorithm>
#include <stdexcept>

#include "ld/errors.hpp"

namespace ld {

Problem Problem::grounded(std::shared_ptr<StatementRegistry> registry, std::vector<Rule> rules, Statement goal) {
  Problem p;
  p.registry_ = std::move(registry);
  p.goal_ = goal;
  p.grounded_ = true;
  auto axioms = std::make_shared<std::vector<Rule>>();
  for (const Rule& r : rules)
    if (r.is_axiom()) axioms->push_back(r);
  p.rules_ = std::make_shared<const std::vector<Rule>>(std::move(rules));
  p.axioms_ = std::move(axioms);
  return p;
}

Problem Problem::implicit(std::shared_ptr<StatementRegistry> registry, std::vector<Rule> axioms,
                          ExpanderFactory factory, Statement goal) {
  Problem p;
  p.registry_ = std::move(registry);
  p.goal_ = goal;
  p.grounded_ = false;
  p.axioms_ = std::make_shared<const std::vector<Rule>>(std::move(axioms));
  p.factory_ = std::move(factory);
  return p;
}

const std::vector<Rule>& Problem::rules() const {
  if (!grounded_) throw std::logic_error("rules() requires a grounded problem");
  return *rules_;
}

std::vector<Rule> Problem::axioms() const { return *axioms_; }

std::unique_ptr<Expander> Problem::make_expander() const {
  if (grounded_) return std::make_unique<RuleIndexExpander>(rules_);
  return factory_();
}

RuleIndexExpander::RuleIndexExpander(std::shared_ptr<const std::vector<Rule>> rules) : rules_(std::move(rules)) {
  for (std::uint32_t i = 0; i < rules_->size(); ++i) {
    const Rule& r = (*rules_)[i];
    for (std::size_t j = 0; j < r.arity(); ++j) {
      Statement a = r.antecedents[j];
      bool seen = false;
      for (std::size_t k = 0; k < j; ++k) seen = seen || r.antecedents[k] == a;
      if (seen) continue;
      if (a.id >= by_antecedent_.size()) by_antecedent_.resize(a.id + 1);
      by_antecedent_[a.id].push_back(i);
    }
  }
}

void RuleIndexExpander::expand(Statement b, const SolutionSet& weighted, std::vector<Rule>& out) {
  if (b.id >= by_antecedent_.size()) return;
  for (std::uint32_t idx : by_antecedent_[b.id]) {
    const Rule& r = (*rules_)[idx];
    bool ready = std::all_of(r.antecedents.begin(), r.antecedents.end(),
                             [&](Statement a) { return weighted.contains(a); });
    if (ready) out.push_back(r);
  }
}

}  // namespace ld
