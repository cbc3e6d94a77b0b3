#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "ld/problem.hpp"

namespace ld {

/// Writes a grounded additive problem as line-oriented text:
///
///     goal <statement>
///     rule <w> <conclusion> <- <antecedent>*
///     signed-rule <w> <conclusion> <- <antecedent>*
///
/// Weights are printed with 17 significant digits so they read back exactly.
void write_problem(std::ostream& os, const Problem& p);

/// Parses the format produced by write_problem. Blank lines and lines
/// starting with '#' are ignored. Statements are interned into `registry`
/// (a fresh one when null).
Problem read_problem(std::istream& is, std::shared_ptr<StatementRegistry> registry = nullptr);

/// Shortest text that parses back to exactly `w` (`inf` for infinity).
std::string format_weight(Weight w);
Weight parse_weight(const std::string& text);

}  // namespace ld
