#include "ld/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ld/agenda.hpp"
#include "ld/errors.hpp"

namespace ld {

RunResult run_prioritized(const Problem& p, const Prioritizer& prioritizer, const RunOptions& options) {
  RunResult result{SolutionSet(p.registry_ptr()), {}, false};
  SolutionSet& solution = result.solution;
  RunStats& stats = result.stats;
  Agenda agenda;
  std::vector<Weight> ws;

  auto push = [&](Rule&& rule) {
    ws.clear();
    for (Statement a : rule.antecedents) ws.push_back(*solution.weight_of(a));
    const Weight w = rule.evaluate(ws);
    const Weight priority = prioritizer(rule, ws, w);
    if (std::isnan(priority)) throw Error("prioritizer returned NaN for " + p.registry().to_string(rule.conclusion));
    if (priority == kInfinity) return;
    if (options.record_pushes) stats.pushes_log.push_back({agenda.pushes(), rule.conclusion, w, priority});
    const Statement c = rule.conclusion;
    agenda.push(priority, c, w, std::move(rule));
    ++stats.pushes;
    stats.peak_agenda = std::max(stats.peak_agenda, agenda.size());
  };

  for (Rule r : p.axioms()) push(std::move(r));

  auto expander = p.make_expander();
  std::vector<Rule> fired;
  bool popped_any = false;
  Weight last_priority = 0;
  while (!agenda.empty()) {
    Agenda::Item item = agenda.pop();
    if (options.assert_monotone && popped_any) {
      const Weight slack = options.monotone_tolerance * std::max<Weight>(1, std::abs(last_priority));
      if (item.priority < last_priority - slack) {
        std::ostringstream msg;
        msg << "priority regression: popped " << p.registry().to_string(item.statement) << " = " << item.weight
            << " at priority " << item.priority << " after a pop at priority " << last_priority;
        throw MonotonicityViolation(msg.str());
      }
    }
    last_priority = popped_any ? std::max(last_priority, item.priority) : item.priority;
    popped_any = true;

    if (solution.contains(item.statement)) {
      ++stats.discarded;
      continue;
    }
    const Statement b = item.statement;
    const Weight w = item.weight;
    solution.insert(b, w, std::move(item.rule));
    stats.expansion_order.push_back({stats.expansions, b, w, item.priority});
    ++stats.expansions;
    if (b == p.goal()) {
      result.goal_derived = true;
      solution.goal_weight = w;
      if (options.stop == StopCondition::kOnGoalExpansion) break;
    }
    fired.clear();
    expander->expand(b, solution, fired);
    for (Rule& r : fired) push(std::move(r));
  }
  return result;
}

RunResult kld(const Problem& p, const RunOptions& options) {
  const Statement goal = p.goal();
  const Weight offset = p.goal_priority_offset();
  return run_prioritized(
      p, [goal, offset](const Rule& r, std::span<const Weight>, Weight w) { return r.conclusion == goal ? w + offset : w; },
      options);
}

RunResult astar_ld(const Problem& p, const Heuristic& h, const RunOptions& options) {
  if (!std::isfinite(h(p.goal()))) throw Error("A*LD requires a finite heuristic value for the goal");
  return run_prioritized(
      p, [&h](const Rule& r, std::span<const Weight>, Weight w) { return w + h(r.conclusion); }, options);
}

SolutionSet dp_acyclic(const Problem& p) {
  const auto& rules = p.rules();
  const StatementRegistry& reg = p.registry();
  const std::size_t n = reg.size();

  std::vector<std::vector<std::uint32_t>> deriving(n);   // conclusion -> rule ids
  std::vector<std::vector<std::uint32_t>> consumers(n);  // statement -> conclusions depending on it
  std::vector<std::uint32_t> indegree(n, 0);
  std::vector<char> present(n, 0);
  for (std::uint32_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    deriving[r.conclusion.id].push_back(i);
    present[r.conclusion.id] = 1;
    for (Statement a : r.antecedents) {
      present[a.id] = 1;
      consumers[a.id].push_back(r.conclusion.id);
      ++indegree[r.conclusion.id];
    }
  }

  std::vector<std::uint32_t> order;
  std::vector<std::uint32_t> ready;
  for (std::uint32_t s = 0; s < n; ++s)
    if (present[s] && indegree[s] == 0) ready.push_back(s);
  while (!ready.empty()) {
    std::uint32_t s = ready.back();
    ready.pop_back();
    order.push_back(s);
    for (std::uint32_t c : consumers[s])
      if (--indegree[c] == 0) ready.push_back(c);
  }

  std::size_t present_count = static_cast<std::size_t>(std::count(present.begin(), present.end(), 1));
  if (order.size() != present_count) {
    // Every statement left over has a leftover predecessor; walk predecessors
    // until one repeats to name a cycle.
    std::uint32_t start = 0;
    while (!present[start] || indegree[start] == 0) ++start;
    std::vector<std::uint32_t> pred(n, Statement::kInvalid);
    for (std::uint32_t s = 0; s < n; ++s)
      if (present[s] && indegree[s] > 0)
        for (std::uint32_t c : consumers[s])
          if (indegree[c] > 0) pred[c] = s;
    std::vector<std::int64_t> seen_at(n, -1);
    std::vector<std::uint32_t> walk;
    std::uint32_t cur = start;
    while (seen_at[cur] < 0) {
      seen_at[cur] = static_cast<std::int64_t>(walk.size());
      walk.push_back(cur);
      cur = pred[cur];
    }
    // The walk follows predecessors; reverse it and start at the smallest id.
    std::vector<std::uint32_t> loop(walk.rbegin(), walk.rend() - seen_at[cur]);
    std::rotate(loop.begin(), std::min_element(loop.begin(), loop.end()), loop.end());
    std::string cycle;
    for (std::uint32_t s : loop) cycle += reg.to_string(Statement{s}) + " -> ";
    cycle += reg.to_string(Statement{loop.front()});
    throw CyclicProblem("problem is cyclic: " + cycle);
  }

  SolutionSet solution(p.registry_ptr());
  std::vector<Weight> ws;
  for (std::uint32_t s : order) {
    const Rule* best = nullptr;
    Weight best_w = kInfinity;
    for (std::uint32_t ri : deriving[s]) {
      const Rule& r = rules[ri];
      ws.clear();
      bool ok = true;
      for (Statement a : r.antecedents) {
        auto w = solution.weight_of(a);
        if (!w) {
          ok = false;
          break;
        }
        ws.push_back(*w);
      }
      if (!ok) continue;
      const Weight w = r.evaluate(ws);
      if (!best || w < best_w) {
        best = &r;
        best_w = w;
      }
    }
    if (best) solution.insert(Statement{s}, best_w, *best);
  }
  solution.goal_weight = solution.weight_of(p.goal());
  return solution;
}

namespace {

Derivation build_derivation(const SolutionSet& solution, Statement s, std::size_t depth_left) {
  if (!solution.contains(s)) throw NotDerived(solution.registry().to_string(s) + " has no derivation");
  if (depth_left == 0) throw MalformedDerivation("backpointers form a cycle");
  const auto& e = solution.entry(s);
  Derivation d{e.backpointer, {}, e.weight};
  d.children.reserve(e.backpointer.arity());
  for (Statement a : e.backpointer.antecedents) d.children.push_back(build_derivation(solution, a, depth_left - 1));
  return d;
}

}  // namespace

Derivation get_derivation(const SolutionSet& solution, Statement s) {
  return build_derivation(solution, s, solution.size() + 1);
}

void write_trace_jsonl(std::ostream& os, const RunStats& stats, const StatementRegistry& registry) {
  auto emit = [&](const char* event, const TraceRecord& r) {
    nlohmann::json j;
    j["event"] = event;
    j["seq"] = r.seq;
    j["statement"] = registry.to_string(r.statement);
    j["weight"] = r.weight;
    j["priority"] = r.priority;
    os << j.dump() << '\n';
  };
  for (const TraceRecord& r : stats.pushes_log) emit("push", r);
  for (const TraceRecord& r : stats.expansion_order) emit("expand", r);
}

}  // namespace ld
