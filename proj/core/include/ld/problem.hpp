#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "ld/rule.hpp"
#include "ld/solution.hpp"
#include "ld/statement.hpp"

namespace ld {

/// Generates rule instances for an implicit problem.
///
/// `expand(b, weighted, out)` is called once per newly weighted statement, in
/// the order statements become weighted. It appends every rule instance that
/// has `b` among its antecedents and whose antecedents all have a weight in
/// `weighted`. Each rule instance must be produced exactly once over a run,
/// i.e. when its last antecedent becomes weighted. Expanders may keep
/// private indexes of the statements they have seen.
class Expander {
 public:
  virtual ~Expander() = default;
  virtual void expand(Statement b, const SolutionSet& weighted, std::vector<Rule>& out) = 0;
};

using ExpanderFactory = std::function<std::unique_ptr<Expander>()>;

/// A lightest derivation problem `(Sigma, R, goal)`.
///
/// Grounded problems carry an explicit rule list. Implicit problems carry
/// their axioms and a factory for a fresh expander per solver run.
class Problem {
 public:
  static constexpr std::size_t kDefaultMaxArity = 4;

  static Problem grounded(std::shared_ptr<StatementRegistry> registry, std::vector<Rule> rules, Statement goal);
  static Problem implicit(std::shared_ptr<StatementRegistry> registry, std::vector<Rule> axioms,
                          ExpanderFactory factory, Statement goal);

  bool is_grounded() const { return grounded_; }
  Statement goal() const { return goal_; }
  StatementRegistry& registry() const { return *registry_; }
  const std::shared_ptr<StatementRegistry>& registry_ptr() const { return registry_; }

  /// All rules of a grounded problem (axioms included).
  const std::vector<Rule>& rules() const;
  /// Rules with no antecedents.
  std::vector<Rule> axioms() const;
  /// A fresh expander; for grounded problems this indexes the rule list.
  std::unique_ptr<Expander> make_expander() const;

  /// Extra priority the KLD prioritizer adds to the goal. Problems whose
  /// goal rules are signed (negative constants) set this to an upper bound
  /// on the subtracted amount so KLD priorities stay non-decreasing; the
  /// stored goal weight is unaffected.
  Weight goal_priority_offset() const { return goal_priority_offset_; }
  void set_goal_priority_offset(Weight offset) { goal_priority_offset_ = offset; }

  std::size_t max_arity() const { return max_arity_; }
  void set_max_arity(std::size_t n) { max_arity_ = n; }

 private:
  std::shared_ptr<StatementRegistry> registry_;
  Statement goal_;
  bool grounded_ = true;
  std::shared_ptr<const std::vector<Rule>> rules_;
  std::shared_ptr<const std::vector<Rule>> axioms_;
  ExpanderFactory factory_;
  Weight goal_priority_offset_ = 0;
  std::size_t max_arity_ = kDefaultMaxArity;
};

/// Expander over an explicit rule list. Rules are indexed by distinct
/// antecedent; a rule fires when its last antecedent becomes weighted.
class RuleIndexExpander : public Expander {
 public:
  explicit RuleIndexExpander(std::shared_ptr<const std::vector<Rule>> rules);
  void expand(Statement b, const SolutionSet& weighted, std::vector<Rule>& out) override;

 private:
  std::shared_ptr<const std::vector<Rule>> rules_;
  std::vector<std::vector<std::uint32_t>> by_antecedent_;
};

}  // namespace ld
