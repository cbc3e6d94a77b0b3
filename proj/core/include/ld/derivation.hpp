#pragma once

#include <vector>

#include "ld/rule.hpp"

namespace ld {

/// A finite tree of rule instances; child i derives antecedent i of `rule`.
struct Derivation {
  Rule rule;
  std::vector<Derivation> children;
  Weight weight = 0;

  Statement conclusion() const { return rule.conclusion; }
  /// Number of rule instances in the tree.
  std::size_t size() const;
  /// Height of the tree (a single axiom has depth 0).
  std::size_t depth() const;
};

/// Recomputes the weight of `d` bottom-up from its weight functions. Throws
/// MalformedDerivation when a child does not derive the matching antecedent.
Weight eval_derivation(const Derivation& d);

}  // namespace ld
