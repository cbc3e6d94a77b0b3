#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ld/rule.hpp"

namespace ld {

/// Binary min-heap of pending weight assignments ordered by
/// (priority, insertion sequence). Payloads live in a slot arena so the
/// heap only moves small handles; slots are recycled after a pop.
class Agenda {
 public:
  struct Item {
    Weight priority = 0;
    std::uint64_t seq = 0;
    Statement statement;
    Weight weight = 0;
    Rule rule;
  };

  void push(Weight priority, Statement statement, Weight weight, Rule rule) {
    std::uint32_t slot;
    if (!free_.empty()) {
      slot = free_.back();
      free_.pop_back();
      slots_[slot] = Payload{statement, weight, std::move(rule)};
    } else {
      slot = static_cast<std::uint32_t>(slots_.size());
      slots_.push_back(Payload{statement, weight, std::move(rule)});
    }
    heap_.push_back(Handle{priority, next_seq_++, slot});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
  }

  Item pop() {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Handle h = heap_.back();
    heap_.pop_back();
    Payload& p = slots_[h.slot];
    Item item{h.priority, h.seq, p.statement, p.weight, std::move(p.rule)};
    free_.push_back(h.slot);
    return item;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  std::uint64_t pushes() const { return next_seq_; }

 private:
  struct Handle {
    Weight priority;
    std::uint64_t seq;
    std::uint32_t slot;
  };
  // std heap algorithms build a max-heap; "later" items compare greater-first.
  struct Later {
    bool operator()(const Handle& a, const Handle& b) const {
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.seq > b.seq;
    }
  };
  struct Payload {
    Statement statement;
    Weight weight;
    Rule rule;
  };

  std::vector<Handle> heap_;
  std::vector<Payload> slots_;
  std::vector<std::uint32_t> free_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace ld
