#include "ld/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ld/errors.hpp"

namespace ld {

std::string format_weight(Weight w) {
  if (std::isinf(w)) return w > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, ptr);
}

Weight parse_weight(const std::string& text) {
  if (text == "inf") return kInfinity;
  if (text == "-inf") return -kInfinity;
  Weight w = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), w);
  if (ec != std::errc() || ptr != text.data() + text.size()) throw InputError("malformed weight: " + text);
  return w;
}

void write_problem(std::ostream& os, const Problem& p) {
  const StatementRegistry& reg = p.registry();
  os << "goal " << reg.to_string(p.goal()) << '\n';
  for (const Rule& r : p.rules()) {
    if (!r.weight.is_additive() || !r.weight.counts_all())
      throw UnsupportedWeightFn("only plain additive rules can be serialized");
    os << (r.weight.is_signed() ? "signed-rule " : "rule ") << format_weight(r.weight.constant()) << ' '
       << reg.to_string(r.conclusion) << " <-";
    for (Statement a : r.antecedents) os << ' ' << reg.to_string(a);
    os << '\n';
  }
}

Problem read_problem(std::istream& is, std::shared_ptr<StatementRegistry> registry) {
  if (!registry) registry = std::make_shared<StatementRegistry>();
  std::vector<Rule> rules;
  std::optional<Statement> goal;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream in(line);
    std::string head;
    if (!(in >> head) || head[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw InputError("line " + std::to_string(line_no) + ": " + why);
    };
    if (head == "goal") {
      std::string s;
      if (!(in >> s)) fail("goal needs a statement");
      goal = registry->parse(s);
    } else if (head == "rule" || head == "signed-rule") {
      std::string w, concl, arrow, ant;
      if (!(in >> w >> concl >> arrow) || arrow != "<-") fail("expected: rule <w> <conclusion> <- <antecedent>*");
      Weight v = 0;
      try {
        v = parse_weight(w);
      } catch (const InputError&) {
        fail("bad weight '" + w + "'");
      }
      Rule r;
      r.conclusion = registry->parse(concl);
      r.weight = head == "rule" ? WeightFn::additive(v) : WeightFn::signed_additive(v);
      while (in >> ant) r.antecedents.push_back(registry->parse(ant));
      rules.push_back(std::move(r));
    } else {
      fail("unknown directive '" + head + "'");
    }
  }
  if (!goal) throw InputError("problem has no goal line");
  return Problem::grounded(std::move(registry), std::move(rules), *goal);
}

}  // namespace ld
