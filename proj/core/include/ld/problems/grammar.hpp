#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ld/problem.hpp"

namespace ld {

/// Weighted context-free grammar in Chomsky normal form.
struct Grammar {
  struct Binary {
    int lhs = 0, left = 0, right = 0;
    Weight weight = 0;
  };
  struct Lexical {
    int lhs = 0, terminal = 0;
    Weight weight = 0;
  };

  std::vector<std::string> nonterminals;
  std::vector<std::string> terminals;
  std::vector<Binary> binary;
  std::vector<Lexical> lexical;
  int start = 0;

  int nonterminal(const std::string& name);
  int terminal(const std::string& token);
  std::optional<int> find_nonterminal(const std::string& name) const;
  std::optional<int> find_terminal(const std::string& token) const;
};

/// Lines `X -> Y Z : w`, `X -> 'tok' : w` and `start X`; `#` starts a
/// comment. Without a `start` line the first left-hand side is the start symbol.
Grammar read_grammar(std::istream& is);
void write_grammar(std::ostream& os, const Grammar& g);

/// Splits on whitespace.
std::vector<std::string> tokenize(const std::string& text);

/// Statements `phrase(X,i,j)` (X derives tokens i..j-1, 1-based) with goal
/// `phrase(S,1,n+1)`. Lexical rules are axioms; binary compositions are
/// generated on demand from start/end indexes of the derived phrases.
/// Throws InputError on tokens outside the terminal set.
Problem parse_problem(const Grammar& g, std::span<const std::string> tokens);

}  // namespace ld
