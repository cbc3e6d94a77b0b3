#include "ld/hald.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ld/errors.hpp"
#include "ld/problem_io.hpp"
#include "ld/problem_tools.hpp"

namespace ld {

// ---------------------------------------------------------------------------
// GroundedLevel

GroundedLevel::GroundedLevel(Problem problem, std::optional<AbstractionMap> to_next)
    : problem_(std::move(problem)), to_next_(std::move(to_next)) {
  const auto& rules = problem_.rules();
  const std::size_t n = problem_.registry().size();
  using_.resize(n);
  deriving_.resize(n);
  std::vector<char> present(n, 0);
  present[problem_.goal().id] = 1;
  for (std::uint32_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    if (!r.weight.is_additive() || !r.weight.counts_all())
      throw UnsupportedWeightFn("hierarchy levels must use additive rules");
    deriving_[r.conclusion.id].push_back(i);
    present[r.conclusion.id] = 1;
    for (std::size_t j = 0; j < r.arity(); ++j) {
      const Statement a = r.antecedents[j];
      present[a.id] = 1;
      if (std::find(r.antecedents.begin(), r.antecedents.begin() + j, a) == r.antecedents.begin() + j)
        using_[a.id].push_back(i);
    }
  }
  if (to_next_) {
    for (std::uint32_t id = 0; id < n; ++id) {
      if (!present[id]) continue;
      const Statement image = (*to_next_)(Statement{id});
      if (image.id >= preimage_.size()) preimage_.resize(image.id + 1);
      preimage_[image.id].push_back(Statement{id});
    }
  }
}

namespace {

bool all_derived(const Rule& r, const DerivedWeight& derived) {
  return std::all_of(r.antecedents.begin(), r.antecedents.end(), [&](Statement a) { return derived(a).has_value(); });
}

}  // namespace

void GroundedLevel::rules_using(Statement b, const DerivedWeight& derived, std::vector<Rule>& out) const {
  if (b.id >= using_.size()) return;
  for (std::uint32_t i : using_[b.id]) {
    const Rule& r = problem_.rules()[i];
    if (all_derived(r, derived)) out.push_back(r);
  }
}

void GroundedLevel::rules_deriving(Statement c, const DerivedWeight& derived, std::vector<Rule>& out) const {
  if (c.id >= deriving_.size()) return;
  for (std::uint32_t i : deriving_[c.id]) {
    const Rule& r = problem_.rules()[i];
    if (all_derived(r, derived)) out.push_back(r);
  }
}

void GroundedLevel::preimage(Statement abstract, std::vector<Statement>& out) const {
  if (abstract.id >= preimage_.size()) return;
  out.insert(out.end(), preimage_[abstract.id].begin(), preimage_[abstract.id].end());
}

Hierarchy make_grounded_hierarchy(std::vector<Problem> problems, std::vector<AbstractionMap> maps) {
  if (problems.empty()) throw SpecError("a hierarchy needs at least one level");
  if (maps.size() + 1 != problems.size()) throw SpecError("a hierarchy with m levels needs m-1 maps");
  Hierarchy h;
  for (std::size_t k = 0; k < problems.size(); ++k) {
    std::optional<AbstractionMap> m;
    if (k + 1 < problems.size()) m = maps[k];
    h.levels.push_back(std::make_shared<GroundedLevel>(std::move(problems[k]), std::move(m)));
  }
  return h;
}

// ---------------------------------------------------------------------------
// text form

Hierarchy read_hierarchy(std::istream& is) {
  std::vector<std::string> sections;
  std::vector<std::vector<std::pair<std::string, std::string>>> maps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream in(line);
    std::string head;
    if (!(in >> head) || head[0] == '#') continue;
    if (head == "level") {
      sections.emplace_back();
      maps.emplace_back();
      continue;
    }
    if (sections.empty()) throw InputError("hierarchy line " + std::to_string(line_no) + ": expected 'level' first");
    if (head == "map") {
      std::string from, to, extra;
      if (!(in >> from >> to) || (in >> extra))
        throw InputError("hierarchy line " + std::to_string(line_no) + ": expected 'map <statement> <statement>'");
      maps.back().emplace_back(from, to);
      continue;
    }
    sections.back() += line;
    sections.back() += '\n';
  }
  if (sections.empty()) throw InputError("hierarchy has no levels");
  std::vector<Problem> problems;
  for (const std::string& text : sections) {
    std::istringstream in(text);
    problems.push_back(read_problem(in));
  }
  if (!maps.back().empty()) throw InputError("the top level cannot have map lines");
  std::vector<AbstractionMap> level_maps;
  for (std::size_t k = 0; k + 1 < problems.size(); ++k) {
    std::unordered_map<std::uint32_t, Statement> table;
    for (const auto& [from, to] : maps[k])
      table[problems[k].registry().parse(from).id] = problems[k + 1].registry().parse(to);
    const std::shared_ptr<StatementRegistry> source = problems[k].registry_ptr();
    level_maps.emplace_back(problems[k + 1].registry_ptr(), [table = std::move(table), source](Statement s) {
      auto it = table.find(s.id);
      if (it == table.end()) throw InputError("hierarchy map has no image for " + source->to_string(s));
      return it->second;
    });
  }
  return make_grounded_hierarchy(std::move(problems), std::move(level_maps));
}

void write_hierarchy(std::ostream& os, const Hierarchy& h) {
  for (std::size_t k = 0; k < h.size(); ++k) {
    const auto* level = dynamic_cast<const GroundedLevel*>(h.levels[k].get());
    if (!level) throw SpecError("write_hierarchy requires grounded levels");
    os << "level\n";
    const Problem p = level->problem();
    write_problem(os, p);
    if (k + 1 == h.size()) continue;
    std::vector<char> seen(p.registry().size(), 0);
    auto emit = [&](Statement s) {
      if (seen[s.id]) return;
      seen[s.id] = 1;
      os << "map " << p.registry().to_string(s) << ' ' << h.level(k + 1).registry().to_string(level->abstract(s)) << '\n';
    };
    emit(p.goal());
    for (const Rule& r : p.rules()) {
      for (Statement a : r.antecedents) emit(a);
      emit(r.conclusion);
    }
  }
}

// ---------------------------------------------------------------------------
// validate_hierarchy

namespace {

Problem level_rules(const HierarchyLevel& level, std::size_t budget) {
  Problem p = level.problem();
  return p.is_grounded() ? p : ground(p, budget);
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ x) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

HierarchyReport validate_hierarchy(const Hierarchy& h, std::size_t statement_budget) {
  HierarchyReport report;
  const std::size_t m = h.size();
  std::vector<Problem> grounded;
  for (std::size_t k = 0; k < m; ++k) grounded.push_back(level_rules(h.level(k), statement_budget));

  for (std::size_t k = 0; k < m; ++k) {
    const Problem& p = grounded[k];
    const StatementRegistry& reg = p.registry();
    for (const Rule& r : p.rules())
      if (!r.weight.is_additive() || !r.weight.counts_all())
        report.issues.push_back({HierarchyIssue::Kind::kNonAdditive, k, "non-additive rule concluding " +
                                                                            reg.to_string(r.conclusion)});
    if (k + 1 == m) continue;

    const HierarchyLevel& level = h.level(k);
    const Problem& up = grounded[k + 1];
    std::unordered_map<std::vector<std::uint32_t>, Weight, KeyHash> abstract_rules;
    std::vector<std::uint32_t> key;
    for (const Rule& r : up.rules()) {
      key.clear();
      for (Statement a : r.antecedents) key.push_back(a.id);
      key.push_back(r.conclusion.id);
      key.push_back(static_cast<std::uint32_t>(r.arity()));
      auto [it, inserted] = abstract_rules.try_emplace(key, r.weight.constant());
      if (!inserted) it->second = std::min(it->second, r.weight.constant());
    }
    for (const Rule& r : p.rules()) {
      key.clear();
      for (Statement a : r.antecedents) key.push_back(level.abstract(a).id);
      key.push_back(level.abstract(r.conclusion).id);
      key.push_back(static_cast<std::uint32_t>(r.arity()));
      auto it = abstract_rules.find(key);
      std::ostringstream rule_text;
      for (Statement a : r.antecedents) rule_text << reg.to_string(a) << ' ';
      rule_text << "->" << r.weight.constant() << ' ' << reg.to_string(r.conclusion);
      if (it == abstract_rules.end()) {
        report.issues.push_back({HierarchyIssue::Kind::kMissingCounterpart, k, rule_text.str()});
      } else if (it->second > r.weight.constant()) {
        std::ostringstream msg;
        msg << rule_text.str() << " has abstract counterpart of weight " << it->second;
        report.issues.push_back({HierarchyIssue::Kind::kHeavierCounterpart, k, msg.str()});
      }
    }
    if (level.abstract(p.goal()) != up.goal())
      report.issues.push_back({HierarchyIssue::Kind::kGoalMismatch, k, "abstract goal differs from next level goal"});

    std::vector<char> mentioned(up.registry().size(), 0);
    mentioned[up.goal().id] = 1;
    for (const Rule& r : up.rules()) {
      mentioned[r.conclusion.id] = 1;
      for (Statement a : r.antecedents) mentioned[a.id] = 1;
    }
    std::vector<Statement> pre;
    for (std::uint32_t id = 0; id < mentioned.size(); ++id) {
      if (!mentioned[id]) continue;
      pre.clear();
      level.preimage(Statement{id}, pre);
      if (pre.empty())
        report.issues.push_back({HierarchyIssue::Kind::kNotOnto, k,
                                 up.registry().to_string(Statement{id}) + " has no preimage"});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// run_hald

namespace {

constexpr std::int32_t kUp = -1;
constexpr std::int32_t kBase = -2;
constexpr std::int32_t kStart = -3;

class GeneralizedTable {
 public:
  explicit GeneralizedTable(std::size_t levels) : registry_(std::make_shared<StatementRegistry>()), levels_(levels) {
    label_ = registry_->label_id("gen");
  }

  Statement get(std::size_t level, GenKind kind, Statement base) {
    const std::int32_t args[] = {static_cast<std::int32_t>(level), static_cast<std::int32_t>(kind),
                                 static_cast<std::int32_t>(base.id)};
    Statement s = registry_->intern(label_, args);
    if (s.id == decoded_.size()) decoded_.push_back({level, kind, base});
    return s;
  }

  std::optional<Statement> find(std::size_t level, GenKind kind, Statement base) const {
    const std::int32_t args[] = {static_cast<std::int32_t>(level), static_cast<std::int32_t>(kind),
                                 static_cast<std::int32_t>(base.id)};
    return registry_->find(label_, args);
  }

  const GeneralizedStatement& decode(Statement s) const { return decoded_[s.id]; }
  const std::vector<GeneralizedStatement>& decoded() const { return decoded_; }
  const std::shared_ptr<StatementRegistry>& registry() const { return registry_; }
  std::size_t levels() const { return levels_; }

 private:
  std::shared_ptr<StatementRegistry> registry_;
  LabelId label_ = 0;
  std::size_t levels_;
  std::vector<GeneralizedStatement> decoded_;
};

class HaldExpander : public Expander {
 public:
  HaldExpander(const Hierarchy& h, std::shared_ptr<GeneralizedTable> table) : h_(h), table_(std::move(table)) {
    m_ = h_.size();
    bottom_context_ = table_->get(m_, GenKind::kContext, Statement{0});
  }

  void expand(Statement phi, const SolutionSet& weighted, std::vector<Rule>& out) override {
    weighted_ = &weighted;
    const GeneralizedStatement g = table_->decode(phi);
    if (g.level == m_) {
      if (g.kind == GenKind::kContext)
        for (const Rule& r : h_.level(m_ - 1).axioms()) emit_up(m_ - 1, r, phi, out);
      return;
    }
    const std::size_t k = g.level;
    const HierarchyLevel& level = h_.level(k);
    buffer_.clear();
    if (g.kind == GenKind::kDerivation) {
      if (g.base == level.goal()) {
        Rule base;
        base.antecedents.push_back(phi);
        base.conclusion = table_->get(k, GenKind::kContext, g.base);
        base.weight = WeightFn::masked(0, 0);
        base.tag = "BASE";
        base.aux = kBase;
        out.push_back(std::move(base));
      }
      level.rules_using(g.base, derived_at(k), buffer_);
      for (const Rule& r : buffer_) {
        if (auto ctx = abstract_context(k, r.conclusion); ctx && weighted.contains(*ctx)) emit_up(k, r, *ctx, out);
        if (auto ctx = table_->find(k, GenKind::kContext, r.conclusion); ctx && weighted.contains(*ctx))
          emit_down(k, r, *ctx, out);
      }
      return;
    }
    if (k > 0) {
      preimage_.clear();
      h_.level(k - 1).preimage(g.base, preimage_);
      for (Statement c : preimage_) {
        buffer_.clear();
        h_.level(k - 1).rules_deriving(c, derived_at(k - 1), buffer_);
        for (const Rule& r : buffer_) emit_up(k - 1, r, phi, out);
      }
    }
    buffer_.clear();
    level.rules_deriving(g.base, derived_at(k), buffer_);
    for (const Rule& r : buffer_) emit_down(k, r, phi, out);
  }

 private:
  DerivedWeight derived_at(std::size_t k) {
    return [this, k](Statement s) -> std::optional<Weight> {
      auto g = table_->find(k, GenKind::kDerivation, s);
      if (!g) return std::nullopt;
      return weighted_->weight_of(*g);
    };
  }

  std::optional<Statement> abstract_context(std::size_t k, Statement c) {
    if (k + 1 == m_) return bottom_context_;
    return table_->find(k + 1, GenKind::kContext, h_.level(k).abstract(c));
  }

  // context(abs(C)), A_1..A_n -> C with weight v + sum(w_i) and priority weight + w_c.
  void emit_up(std::size_t k, const Rule& r, Statement context, std::vector<Rule>& out) {
    Rule u;
    u.antecedents.push_back(context);
    for (Statement a : r.antecedents) u.antecedents.push_back(table_->get(k, GenKind::kDerivation, a));
    u.conclusion = table_->get(k, GenKind::kDerivation, r.conclusion);
    const std::uint32_t all = (1u << u.antecedents.size()) - 1u;
    u.weight = WeightFn::masked(r.weight.constant(), all & ~1u);
    u.tag = "UP";
    u.aux = kUp;
    out.push_back(std::move(u));
  }

  // context(C), A_1..A_n -> context(A_i) with weight v + w_c + sum_{j != i} w_j
  // and priority weight + w_i.
  void emit_down(std::size_t k, const Rule& r, Statement context, std::vector<Rule>& out) {
    if (r.is_axiom()) return;
    Antecedents ants;
    ants.push_back(context);
    for (Statement a : r.antecedents) ants.push_back(table_->get(k, GenKind::kDerivation, a));
    const std::uint32_t all = (1u << ants.size()) - 1u;
    for (std::size_t i = 0; i < r.arity(); ++i) {
      Rule d;
      d.antecedents = ants;
      d.conclusion = table_->get(k, GenKind::kContext, r.antecedents[i]);
      d.weight = WeightFn::masked(r.weight.constant(), all & ~(1u << (i + 1)));
      d.tag = "DOWN";
      d.aux = static_cast<std::int32_t>(i + 1);
      out.push_back(std::move(d));
    }
  }

  const Hierarchy& h_;
  std::shared_ptr<GeneralizedTable> table_;
  std::size_t m_ = 0;
  Statement bottom_context_;
  const SolutionSet* weighted_ = nullptr;
  std::vector<Rule> buffer_;
  std::vector<Statement> preimage_;
};

Weight hald_priority(const Rule& r, std::span<const Weight> ws, Weight w) {
  switch (r.aux) {
    case kStart:
      return w;
    case kBase:
      return ws[0];
    case kUp:
      return w + ws[0];
    default:
      return w + ws[static_cast<std::size_t>(r.aux)];
  }
}

Derivation to_level_zero(const SolutionSet& s, const GeneralizedTable& table, const Hierarchy& h, Statement g) {
  const auto& e = s.entry(g);
  const Rule& up = e.backpointer;
  Derivation d;
  d.weight = e.weight;
  d.rule.conclusion = table.decode(g).base;
  d.rule.weight = WeightFn::additive(up.weight.constant());
  for (std::size_t i = 1; i < up.arity(); ++i) {
    d.rule.antecedents.push_back(table.decode(up.antecedents[i]).base);
    d.children.push_back(to_level_zero(s, table, h, up.antecedents[i]));
  }
  return d;
}

}  // namespace

HaldResult run_hald(const Hierarchy& h, const HaldOptions& options) {
  if (h.size() == 0) throw SpecError("empty hierarchy");
  const std::size_t m = h.size();
  auto table = std::make_shared<GeneralizedTable>(m);
  const Statement bottom = table->get(m, GenKind::kDerivation, Statement{0});
  const Statement bottom_context = table->get(m, GenKind::kContext, Statement{0});
  const Statement goal = table->get(0, GenKind::kDerivation, h.level(0).goal());

  Rule start1 = make_axiom(bottom, 0);
  start1.tag = "START1";
  start1.aux = kStart;
  Rule start2 = make_axiom(bottom_context, 0);
  start2.tag = "START2";
  start2.aux = kStart;

  Problem generalized = Problem::implicit(
      table->registry(), {start1, start2}, [&h, table] { return std::make_unique<HaldExpander>(h, table); }, goal);
  generalized.set_max_arity(Antecedents::kCapacity);

  RunOptions run_options;
  run_options.stop = options.stop_on_goal ? StopCondition::kOnGoalExpansion : StopCondition::kQueueEmpty;
  run_options.assert_monotone = options.assert_monotone;
  run_options.record_pushes = options.record_pushes;
  RunResult run;
  try {
    run = run_prioritized(generalized, hald_priority, run_options);
  } catch (const MonotonicityViolation& e) {
    throw Error(std::string("internal error in hierarchical search: ") + e.what());
  }

  HaldResult result;
  result.derivations.resize(m + 1);
  result.contexts.resize(m + 1);
  result.expansions_per_level.assign(m + 1, 0);
  for (const auto& e : run.solution.entries()) {
    const GeneralizedStatement& g = table->decode(e.statement);
    auto& bucket = g.kind == GenKind::kDerivation ? result.derivations : result.contexts;
    bucket[g.level].emplace_back(g.base, e.weight);
    ++result.expansions_per_level[g.level];
  }
  result.total_expansions = run.stats.expansions;
  if (auto w = run.solution.weight_of(goal)) {
    result.goal_derived = true;
    result.goal_weight = *w;
    result.goal_derivation = to_level_zero(run.solution, *table, h, goal);
  }
  result.stats = std::move(run.stats);
  result.generalized = table->decoded();
  return result;
}

// ---------------------------------------------------------------------------
// count_K

std::size_t count_K(const Hierarchy& h, std::size_t statement_budget) {
  const std::size_t m = h.size();
  std::vector<Problem> grounded;
  std::vector<SolutionSet> derivations;
  std::vector<PatternDatabase> contexts;
  for (std::size_t k = 0; k < m; ++k) {
    grounded.push_back(level_rules(h.level(k), statement_budget));
    derivations.push_back(closure_weights(grounded.back()));
    contexts.push_back(build_pdb(grounded.back()));
  }
  const auto goal_weight = derivations[0].weight_of(h.level(0).goal());
  if (!goal_weight) throw NotDerived("level-0 goal has no derivation");
  const Weight bound = *goal_weight + 1e-9 * std::max<Weight>(1, std::abs(*goal_weight));

  std::size_t count = 0 <= bound ? 1 : 0;  // ⊥ has intrinsic priority 0
  for (std::size_t k = 0; k < m; ++k) {
    for (const auto& e : derivations[k].entries()) {
      const Weight h_value = k + 1 == m ? 0 : contexts[k + 1].lookup(h.level(k).abstract(e.statement));
      if (e.weight + h_value <= bound) ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// level_pdb

LevelPdb level_pdb(const Hierarchy& h, std::size_t level, std::size_t statement_budget) {
  if (level >= h.size()) throw SpecError("pattern database level " + std::to_string(level) + " is not in the hierarchy");
  const Problem abstract = level_rules(h.level(level), statement_budget);
  auto db = std::make_shared<const PatternDatabase>(build_pdb(abstract));
  std::vector<std::shared_ptr<HierarchyLevel>> path(h.levels.begin(), h.levels.begin() + static_cast<std::ptrdiff_t>(level));
  AbstractionMap map(h.level(level).registry_ptr(), [path = std::move(path)](Statement s) {
    for (const auto& l : path) s = l->abstract(s);
    return s;
  });
  return {db, map, pdb_heuristic(db, map, AbsentEntry::kPrune)};
}

// ---------------------------------------------------------------------------
// tracing

std::string describe(const GeneralizedStatement& g, const Hierarchy& h) {
  std::string base = g.level == h.size() ? "⊥" : h.level(g.level).registry().to_string(g.base);
  return g.kind == GenKind::kContext ? "context(" + base + ")" : base;
}

void write_hald_trace_jsonl(std::ostream& os, const HaldResult& result, const Hierarchy& h) {
  auto emit = [&](const char* event, const TraceRecord& r) {
    const GeneralizedStatement& g = result.decode(r.statement);
    nlohmann::json j;
    j["event"] = event;
    j["seq"] = r.seq;
    j["statement"] = describe(g, h);
    j["weight"] = r.weight;
    j["priority"] = r.priority;
    j["level"] = g.level;
    j["kind"] = g.kind == GenKind::kContext ? "context" : "derivation";
    os << j.dump() << '\n';
  };
  for (const TraceRecord& r : result.stats.pushes_log) emit("push", r);
  for (const TraceRecord& r : result.stats.expansion_order) emit("expand", r);
}

}  // namespace ld
