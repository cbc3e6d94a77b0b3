#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>

#include "ld/statement.hpp"

namespace ld {

using Weight = double;
inline constexpr Weight kInfinity = std::numeric_limits<Weight>::infinity();

/// Weight of a rule's conclusion as a function of its antecedent weights.
///
/// The additive form is `v + sum(w_i)` where the sum optionally runs over a
/// subset of antecedents selected by a bit mask; this covers every rule of
/// the built-in problems and the generalized rules of the hierarchical
/// solver. General callbacks must be non-decreasing in every argument.
class WeightFn {
 public:
  using General = std::function<Weight(std::span<const Weight>)>;
  static constexpr std::uint32_t kAllAntecedents = ~std::uint32_t{0};

  WeightFn() = default;

  static WeightFn additive(Weight v) { return WeightFn(v, kAllAntecedents, false); }
  /// Additive rule whose constant may be negative (e.g. a saliency bonus).
  static WeightFn signed_additive(Weight v) { return WeightFn(v, kAllAntecedents, true); }
  /// Additive over the antecedents whose bit is set in `counted`.
  static WeightFn masked(Weight v, std::uint32_t counted) { return WeightFn(v, counted, false); }
  static WeightFn general(General fn) {
    WeightFn w;
    w.general_ = std::make_shared<const General>(std::move(fn));
    return w;
  }

  Weight operator()(std::span<const Weight> ws) const {
    if (general_) return (*general_)(ws);
    Weight total = v_;
    for (std::size_t i = 0; i < ws.size(); ++i)
      if (mask_ >> i & 1u) total += ws[i];
    return total;
  }

  bool is_additive() const { return !general_; }
  bool is_signed() const { return signed_; }
  /// Rule constant `v`; meaningful only for additive functions.
  Weight constant() const { return v_; }
  std::uint32_t mask() const { return mask_; }
  bool counts_all() const { return mask_ == kAllAntecedents; }

 private:
  WeightFn(Weight v, std::uint32_t mask, bool is_signed) : v_(v), mask_(mask), signed_(is_signed) {}

  Weight v_ = 0;
  std::uint32_t mask_ = kAllAntecedents;
  bool signed_ = false;
  std::shared_ptr<const General> general_;
};

/// Fixed-capacity inline list of antecedents.
class Antecedents {
 public:
  static constexpr std::size_t kCapacity = 6;

  Antecedents() = default;
  Antecedents(std::initializer_list<Statement> init) {
    for (Statement s : init) push_back(s);
  }
  explicit Antecedents(std::span<const Statement> init) {
    for (Statement s : init) push_back(s);
  }

  void push_back(Statement s) {
    if (size_ == kCapacity) throw std::length_error("too many antecedents");
    items_[size_++] = s;
  }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  Statement operator[](std::size_t i) const { return items_[i]; }
  Statement& operator[](std::size_t i) { return items_[i]; }
  const Statement* begin() const { return items_.data(); }
  const Statement* end() const { return items_.data() + size_; }
  std::span<const Statement> span() const { return {items_.data(), size_}; }

  friend bool operator==(const Antecedents& a, const Antecedents& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<Statement, kCapacity> items_{};
  std::uint8_t size_ = 0;
};

/// A rule instance `A_1, ..., A_n ->_g C`. A rule with no antecedents is an
/// axiom whose weight is `g()`.
struct Rule {
  Antecedents antecedents;
  Statement conclusion;
  WeightFn weight;
  /// Optional label for tracing; must point at static storage.
  const char* tag = nullptr;
  /// Solver-specific annotation (used by the hierarchical solver).
  std::int32_t aux = 0;

  std::size_t arity() const { return antecedents.size(); }
  bool is_axiom() const { return antecedents.empty(); }
  Weight evaluate(std::span<const Weight> ws) const { return weight(ws); }
};

inline Rule make_rule(std::initializer_list<Statement> ants, Statement conclusion, Weight v) {
  return Rule{Antecedents(ants), conclusion, WeightFn::additive(v)};
}

inline Rule make_axiom(Statement conclusion, Weight v) {
  return Rule{Antecedents{}, conclusion, WeightFn::additive(v)};
}

}  // namespace ld
