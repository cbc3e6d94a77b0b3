#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ld/problem.hpp"

namespace ld {

struct ProblemIssue {
  enum class Kind { kNonMonotoneWeight, kNegativeWeight, kArityExceeded };
  Kind kind;
  Rule rule;
  std::string detail;
};

struct ProblemReport {
  std::vector<ProblemIssue> issues;
  std::size_t rules_checked = 0;
  bool ok() const { return issues.empty(); }
};

/// Checks weight functions. General functions are sampled (`samples` random
/// points per rule, each argument raised in turn); negative additive
/// constants are reported unless the rule is flagged signed. Implicit
/// problems are explored breadth first up to `samples` rule instances.
ProblemReport validate_problem(const Problem& p, std::size_t samples = 64, std::uint64_t seed = 1);

/// Forward closure of an implicit problem (ignoring weights) as an
/// equivalent grounded problem. Throws BudgetExceeded when more than
/// `statement_budget` statements are reached.
Problem ground(const Problem& p, std::size_t statement_budget);

}  // namespace ld
