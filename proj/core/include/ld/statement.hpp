#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ld {

/// Interned identity of a derivable fact. Ids are dense and assigned in
/// registration order by a StatementRegistry.
struct Statement {
  static constexpr std::uint32_t kInvalid = std::numeric_limits<std::uint32_t>::max();

  std::uint32_t id = kInvalid;

  constexpr bool valid() const { return id != kInvalid; }
  friend constexpr auto operator<=>(Statement, Statement) = default;
};

using LabelId = std::uint32_t;

/// Bijective map between (label, integer args) keys and dense Statement ids.
///
/// Registries are mutated while problems are built and while implicit
/// problems are expanded; they are not synchronized.
class StatementRegistry {
 public:
  static constexpr std::size_t kMaxArgs = 6;

  LabelId label_id(std::string_view label);
  std::optional<LabelId> find_label(std::string_view label) const;

  Statement intern(LabelId label, std::span<const std::int32_t> args);
  Statement intern(std::string_view label, std::span<const std::int32_t> args);
  Statement intern(std::string_view label, std::initializer_list<std::int32_t> args = {}) {
    return intern(label, std::span<const std::int32_t>(args.begin(), args.size()));
  }

  std::optional<Statement> find(LabelId label, std::span<const std::int32_t> args) const;
  std::optional<Statement> find(std::string_view label, std::span<const std::int32_t> args) const;

  LabelId label_of(Statement s) const { return keys_[s.id].label; }
  std::string_view label(Statement s) const { return labels_[keys_[s.id].label]; }
  std::span<const std::int32_t> args(Statement s) const {
    const Key& k = keys_[s.id];
    return {k.args.data(), k.arity};
  }
  std::int32_t arg(Statement s, std::size_t i) const { return keys_[s.id].args[i]; }

  /// Text form `label(a,b,c)`, or `label` when there are no args.
  std::string to_string(Statement s) const;
  /// Inverse of to_string; interns the parsed key.
  Statement parse(std::string_view text);

  std::size_t size() const { return keys_.size(); }

 private:
  struct Key {
    LabelId label = 0;
    std::uint8_t arity = 0;
    std::array<std::int32_t, kMaxArgs> args{};
    friend bool operator==(const Key& a, const Key& b) {
      if (a.label != b.label || a.arity != b.arity) return false;
      for (std::size_t i = 0; i < a.arity; ++i)
        if (a.args[i] != b.args[i]) return false;
      return true;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  static Key make_key(LabelId label, std::span<const std::int32_t> args);

  std::vector<std::string> labels_;
  std::unordered_map<std::string, LabelId> label_ids_;
  std::vector<Key> keys_;
  std::unordered_map<Key, std::uint32_t, KeyHash> ids_;
};

}  // namespace ld

template <>
struct std::hash<ld::Statement> {
  std::size_t operator()(ld::Statement s) const noexcept { return std::hash<std::uint32_t>{}(s.id); }
};
