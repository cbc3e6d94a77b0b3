#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "ld/rule.hpp"
#include "ld/statement.hpp"

namespace ld {

/// Weighted statements produced by a solver together with the rule instance
/// that produced each weight. At most one entry per statement.
class SolutionSet {
 public:
  struct Entry {
    Statement statement;
    Weight weight = 0;
    Rule backpointer;
  };

  SolutionSet() = default;
  explicit SolutionSet(std::shared_ptr<StatementRegistry> registry) : registry_(std::move(registry)) {}

  bool contains(Statement s) const { return s.id < slots_.size() && slots_[s.id] >= 0; }

  std::optional<Weight> weight_of(Statement s) const {
    if (!contains(s)) return std::nullopt;
    return entries_[static_cast<std::size_t>(slots_[s.id])].weight;
  }

  const Entry& entry(Statement s) const { return entries_[static_cast<std::size_t>(slots_[s.id])]; }
  const Rule& backpointer(Statement s) const { return entry(s).backpointer; }

  /// Inserts a new entry; returns false (and changes nothing) when `s` is present.
  bool insert(Statement s, Weight w, Rule rule) {
    if (s.id >= slots_.size()) slots_.resize(static_cast<std::size_t>(s.id) + 1, -1);
    if (slots_[s.id] >= 0) return false;
    slots_[s.id] = static_cast<std::int32_t>(entries_.size());
    entries_.push_back(Entry{s, w, std::move(rule)});
    return true;
  }

  /// Entries in insertion order.
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const std::shared_ptr<StatementRegistry>& registry_ptr() const { return registry_; }
  StatementRegistry& registry() const { return *registry_; }

  /// Weight of the goal when it was derived (the lightest goal weight for exact solvers).
  std::optional<Weight> goal_weight;

 private:
  std::shared_ptr<StatementRegistry> registry_;
  std::vector<std::int32_t> slots_;
  std::vector<Entry> entries_;
};

}  // namespace ld
