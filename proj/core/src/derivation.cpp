#include "ld/derivation.hpp"

#include <algorithm>
#include <string>

#include "ld/errors.hpp"

namespace ld {

std::size_t Derivation::size() const {
  std::size_t n = 1;
  for (const Derivation& c : children) n += c.size();
  return n;
}

std::size_t Derivation::depth() const {
  std::size_t d = 0;
  for (const Derivation& c : children) d = std::max(d, c.depth() + 1);
  return d;
}

Weight eval_derivation(const Derivation& d) {
  if (d.children.size() != d.rule.arity())
    throw MalformedDerivation("derivation node has " + std::to_string(d.children.size()) + " children for a rule of arity " +
                              std::to_string(d.rule.arity()));
  std::vector<Weight> ws;
  ws.reserve(d.children.size());
  for (std::size_t i = 0; i < d.children.size(); ++i) {
    if (d.children[i].rule.conclusion != d.rule.antecedents[i])
      throw MalformedDerivation("child " + std::to_string(i) + " does not derive the matching antecedent");
    ws.push_back(eval_derivation(d.children[i]));
  }
  return d.rule.evaluate(ws);
}

}  // namespace ld
