#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ld/engine.hpp"
#include "ld/problem.hpp"

namespace ld {

/// Label prefix of context statements; base labels must not start with it.
inline constexpr std::string_view kContextPrefix = "context:";

/// `c(R)` together with `R`: base statements keep their ids and every base
/// statement B gets a distinct wrapper `context(B)`.
struct ContextProblem {
  Problem problem;
  /// Wrapper of each base statement, indexed by base id.
  std::vector<Statement> context_of;
  std::size_t base_size = 0;

  Statement context(Statement base) const { return context_of[base.id]; }
};

/// Builds R plus the context rules: `-> context(goal)` with weight 0, and for
/// each rule `A_1..A_n ->_v C` and each i the rule
/// `context(C), A_1..A_{i-1}, A_{i+1}..A_n ->_v context(A_i)`.
/// Throws UnsupportedWeightFn for non-additive rules.
ContextProblem context_problem(const Problem& p);

/// Total map from base statements onto abstract statements.
class AbstractionMap {
 public:
  using Fn = std::function<Statement(Statement)>;
  using KeyFn = std::function<Statement(const StatementRegistry& source, Statement s, StatementRegistry& target)>;

  AbstractionMap() = default;
  AbstractionMap(std::shared_ptr<StatementRegistry> target, Fn fn) : target_(std::move(target)), fn_(std::move(fn)) {}

  /// Map defined on keys; abstract statements are interned into `target` on demand.
  static AbstractionMap from_keys(std::shared_ptr<StatementRegistry> source, std::shared_ptr<StatementRegistry> target,
                                  KeyFn key_fn);
  static AbstractionMap identity(std::shared_ptr<StatementRegistry> registry);

  Statement operator()(Statement s) const { return fn_(s); }
  StatementRegistry& target() const { return *target_; }
  const std::shared_ptr<StatementRegistry>& target_ptr() const { return target_; }

  /// Applies `first`, then `second`.
  friend AbstractionMap compose(const AbstractionMap& first, const AbstractionMap& second);

 private:
  std::shared_ptr<StatementRegistry> target_;
  Fn fn_;
};

/// Images of the rules of a grounded additive problem under `m`, keeping one
/// copy of each (antecedents, conclusion) with the minimum constant.
Problem project(const Problem& p, const AbstractionMap& m);

/// Lightest context weights of an abstract problem; absent entries are +inf.
class PatternDatabase {
 public:
  PatternDatabase() = default;
  explicit PatternDatabase(std::shared_ptr<StatementRegistry> registry) : registry_(std::move(registry)) {}

  Weight lookup(Statement abstract) const {
    return abstract.id < weights_.size() ? weights_[abstract.id] : kInfinity;
  }
  bool contains(Statement abstract) const { return lookup(abstract) != kInfinity; }
  void set(Statement abstract, Weight w);
  std::size_t size() const { return count_; }

  StatementRegistry& registry() const { return *registry_; }
  const std::shared_ptr<StatementRegistry>& registry_ptr() const { return registry_; }

  /// Lines `pdb <abstract-statement> <weight>`.
  void write(std::ostream& os) const;
  static PatternDatabase read(std::istream& is, std::shared_ptr<StatementRegistry> registry);

  /// Entries in ascending statement id.
  std::vector<std::pair<Statement, Weight>> entries() const;

 private:
  std::shared_ptr<StatementRegistry> registry_;
  std::vector<Weight> weights_;
  std::size_t count_ = 0;
};

/// Solves the context problem of `abstract_problem` to closure and records
/// every context weight. Uses KLD; problems containing signed rules (whose
/// contexts can be negative) are solved by dynamic programming instead and
/// must then be acyclic.
PatternDatabase build_pdb(const Problem& abstract_problem);

enum class AbsentEntry { kPrune, kZero };

/// h(C) = db[m(C)]; absent entries give +inf (prune) or 0.
Heuristic pdb_heuristic(std::shared_ptr<const PatternDatabase> db, AbstractionMap m,
                        AbsentEntry absent = AbsentEntry::kPrune);

struct MonotoneViolation {
  Rule rule;
  std::size_t antecedent = 0;
  Weight lhs = 0;  // w_i + h(A_i)
  Weight rhs = 0;  // g(w) + h(C)
};

struct MonotoneReport {
  std::vector<MonotoneViolation> violations;
  std::size_t rules_checked = 0;
  bool ok() const { return violations.empty(); }
};

/// Checks `w_i + h(A_i) <= g(w_1..w_n) + h(C)` for every rule instance whose
/// antecedents are weighted in `closure` (at those weights), up to
/// `sample_budget` rules. Rule instances are enumerated by replaying the
/// problem's expander over the closure's insertion order.
MonotoneReport check_monotone(const Problem& p, const Heuristic& h, const SolutionSet& closure,
                              std::size_t sample_budget = static_cast<std::size_t>(-1), double tolerance = 1e-9);

/// Runs a closure (KLD, or DP for signed problems) and checks every rule.
MonotoneReport check_monotone(const Problem& p, const Heuristic& h,
                              std::size_t sample_budget = static_cast<std::size_t>(-1), double tolerance = 1e-9);

/// Lightest weights of every derivable statement: KLD to closure, or DP on the
/// grounded problem when it contains signed rules.
SolutionSet closure_weights(const Problem& p);

}  // namespace ld
