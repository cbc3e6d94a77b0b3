#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ld/abstraction.hpp"
#include "ld/engine.hpp"
#include "ld/problem.hpp"

namespace ld {

/// Read-only view of the statements already derived at one level.
using DerivedWeight = std::function<std::optional<Weight>(Statement)>;

/// One additive problem `(Sigma_k, R_k)` of an abstraction hierarchy, with
/// the indexes the hierarchical solver needs.
class HierarchyLevel {
 public:
  virtual ~HierarchyLevel() = default;

  virtual const std::shared_ptr<StatementRegistry>& registry_ptr() const = 0;
  StatementRegistry& registry() const { return *registry_ptr(); }
  virtual Statement goal() const = 0;

  virtual std::vector<Rule> axioms() const = 0;
  /// Rules having `b` among their antecedents with every antecedent derived.
  /// Each rule appears once even if `b` occurs twice.
  virtual void rules_using(Statement b, const DerivedWeight& derived, std::vector<Rule>& out) const = 0;
  /// Rules concluding `c` (axioms included) with every antecedent derived.
  virtual void rules_deriving(Statement c, const DerivedWeight& derived, std::vector<Rule>& out) const = 0;
  /// Statements of this level mapped onto `abstract` (a statement of the next level).
  virtual void preimage(Statement abstract, std::vector<Statement>& out) const = 0;
  /// Image of `s` in the next level. Not called on the top level.
  virtual Statement abstract(Statement s) const = 0;
  /// This level as an ordinary problem (grounded or implicit).
  virtual Problem problem() const = 0;
};

/// A level backed by a grounded problem and an explicit map to the next level.
class GroundedLevel : public HierarchyLevel {
 public:
  /// `to_next` is empty for the top level.
  GroundedLevel(Problem problem, std::optional<AbstractionMap> to_next);

  const std::shared_ptr<StatementRegistry>& registry_ptr() const override { return problem_.registry_ptr(); }
  Statement goal() const override { return problem_.goal(); }
  std::vector<Rule> axioms() const override { return problem_.axioms(); }
  void rules_using(Statement b, const DerivedWeight& derived, std::vector<Rule>& out) const override;
  void rules_deriving(Statement c, const DerivedWeight& derived, std::vector<Rule>& out) const override;
  void preimage(Statement abstract, std::vector<Statement>& out) const override;
  Statement abstract(Statement s) const override { return (*to_next_)(s); }
  Problem problem() const override { return problem_; }

  const std::optional<AbstractionMap>& map() const { return to_next_; }

 private:
  Problem problem_;
  std::optional<AbstractionMap> to_next_;
  std::vector<std::vector<std::uint32_t>> using_;
  std::vector<std::vector<std::uint32_t>> deriving_;
  std::vector<std::vector<Statement>> preimage_;
};

/// Levels 0..m-1; level m-1 maps onto the single statement ⊥.
struct Hierarchy {
  std::vector<std::shared_ptr<HierarchyLevel>> levels;

  std::size_t size() const { return levels.size(); }
  const HierarchyLevel& level(std::size_t k) const { return *levels[k]; }
};

/// Builds a hierarchy from grounded problems and the maps between them
/// (`maps.size() == problems.size() - 1`).
Hierarchy make_grounded_hierarchy(std::vector<Problem> problems, std::vector<AbstractionMap> maps);

struct HierarchyIssue {
  enum class Kind { kMissingCounterpart, kHeavierCounterpart, kNotOnto, kNonAdditive, kGoalMismatch };
  Kind kind;
  std::size_t level = 0;
  std::string detail;
};

struct HierarchyReport {
  std::vector<HierarchyIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Text form of a grounded hierarchy. Each level starts with a `level` line
/// followed by problem lines (see write_problem); `map <statement> <statement>`
/// lines send a statement of that level to one of the next level.
Hierarchy read_hierarchy(std::istream& is);
/// Requires every level to be a GroundedLevel.
void write_hierarchy(std::ostream& os, const Hierarchy& h);

/// Checks that every rule of level k has an abstract counterpart of no
/// greater weight, that maps are onto, that rules are additive and that
/// goals correspond. Implicit levels are grounded with `statement_budget`.
HierarchyReport validate_hierarchy(const Hierarchy& h, std::size_t statement_budget = 1'000'000);

enum class GenKind : std::uint8_t { kDerivation = 0, kContext = 1 };

/// Identity of a generalized statement: a derivation or a context of a
/// statement at some level (level m holds ⊥).
struct GeneralizedStatement {
  std::size_t level = 0;
  GenKind kind = GenKind::kDerivation;
  Statement base;
};

struct HaldOptions {
  bool stop_on_goal = true;
  bool assert_monotone = true;
  bool record_pushes = false;
};

struct HaldResult {
  /// Lightest derivation and context weights found at each level.
  std::vector<std::vector<std::pair<Statement, Weight>>> derivations;
  std::vector<std::vector<std::pair<Statement, Weight>>> contexts;
  bool goal_derived = false;
  Weight goal_weight = kInfinity;
  /// Lightest derivation of the level-0 goal in terms of level-0 rules.
  std::optional<Derivation> goal_derivation;
  /// Expansions per level (index m counts ⊥ and context(⊥)).
  std::vector<std::uint64_t> expansions_per_level;
  std::uint64_t total_expansions = 0;
  RunStats stats;
  /// Decodes statements of `stats` (which live in an internal registry).
  std::vector<GeneralizedStatement> generalized;

  const GeneralizedStatement& decode(Statement s) const { return generalized[s.id]; }
};

/// Hierarchical A*LD over one shared agenda (START/BASE/UP/DOWN rules).
HaldResult run_hald(const Hierarchy& h, const HaldOptions& options = {});

/// Number of statements C in the whole hierarchy (⊥ included) whose
/// intrinsic priority l(C) + l(context(abs(C))) is at most l(goal_0),
/// computed from closure runs at every level.
std::size_t count_K(const Hierarchy& h, std::size_t statement_budget = 1'000'000);

/// Pattern database of level `level` as an A*LD heuristic for level 0.
/// Implicit levels are grounded within `statement_budget`.
struct LevelPdb {
  std::shared_ptr<const PatternDatabase> db;
  AbstractionMap map;
  Heuristic heuristic;
};
LevelPdb level_pdb(const Hierarchy& h, std::size_t level, std::size_t statement_budget = 10'000'000);

/// JSON lines with records `{event, seq, statement, weight, priority, level, kind}`.
void write_hald_trace_jsonl(std::ostream& os, const HaldResult& result, const Hierarchy& h);

/// Text form of a generalized statement, e.g. `context(X(1))` or `⊥`.
std::string describe(const GeneralizedStatement& g, const Hierarchy& h);

}  // namespace ld
