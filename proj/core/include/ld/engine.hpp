#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ld/derivation.hpp"
#include "ld/problem.hpp"
#include "ld/solution.hpp"

namespace ld {

/// Priority of a rule firing given the antecedent weights and the
/// conclusion weight. A non-finite (+inf) priority drops the firing.
using Prioritizer = std::function<Weight(const Rule&, std::span<const Weight>, Weight)>;

/// Estimate of the weight still needed to reach the goal from a statement.
/// +inf marks statements that can be ignored.
using Heuristic = std::function<Weight(Statement)>;

enum class StopCondition { kOnGoalExpansion, kQueueEmpty };

struct RunOptions {
  StopCondition stop = StopCondition::kOnGoalExpansion;
  /// Raise MonotonicityViolation when a pop has lower priority than the previous pop.
  bool assert_monotone = true;
  /// Relative slack for the monotonicity assertion (absorbs float rounding).
  double monotone_tolerance = 1e-9;
  /// Record every push in RunStats::pushes_log.
  bool record_pushes = false;
};

struct TraceRecord {
  std::uint64_t seq = 0;
  Statement statement;
  Weight weight = 0;
  Weight priority = 0;
};

struct RunStats {
  std::uint64_t expansions = 0;
  std::uint64_t discarded = 0;
  std::uint64_t pushes = 0;
  std::size_t peak_agenda = 0;
  /// Expanded statements in order, with their weights and pop priorities.
  std::vector<TraceRecord> expansion_order;
  /// Filled only when RunOptions::record_pushes is set.
  std::vector<TraceRecord> pushes_log;
};

struct RunResult {
  SolutionSet solution;
  RunStats stats;
  /// False when the goal has no derivation (or was pruned).
  bool goal_derived = false;
};

/// Executes prioritized rules: the agenda starts with the axioms, the lowest
/// priority assignment is popped repeatedly, discarded if its statement is
/// already weighted, otherwise stored and expanded.
RunResult run_prioritized(const Problem& p, const Prioritizer& prioritizer, const RunOptions& options = {});

/// Knuth's lightest derivation: priority is the conclusion weight (plus the
/// problem's goal priority offset for the goal).
RunResult kld(const Problem& p, const RunOptions& options = {});

/// A* lightest derivation: priority is the conclusion weight plus h(conclusion).
RunResult astar_ld(const Problem& p, const Heuristic& h, const RunOptions& options = {});

/// Lightest weights of a grounded acyclic problem by dynamic programming
/// over a topological order. Throws CyclicProblem naming one cycle.
SolutionSet dp_acyclic(const Problem& p);

/// Follows backpointers from `s`. Throws NotDerived when `s` has no entry.
Derivation get_derivation(const SolutionSet& solution, Statement s);

/// One JSON object per line: `{"seq","statement","weight","priority"}`,
/// with an "event" field of "expand" or "push".
void write_trace_jsonl(std::ostream& os, const RunStats& stats, const StatementRegistry& registry);

}  // namespace ld
