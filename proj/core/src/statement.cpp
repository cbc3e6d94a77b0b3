#include "ld/statement.hpp"

#include <charconv>
#include <stdexcept>

#include "ld/errors.hpp"

namespace ld {

std::size_t StatementRegistry::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ (std::uint64_t{k.label} << 8 | k.arity);
  for (std::size_t i = 0; i < k.arity; ++i) {
    h ^= static_cast<std::uint32_t>(k.args[i]);
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
  }
  return static_cast<std::size_t>(h);
}

StatementRegistry::Key StatementRegistry::make_key(LabelId label, std::span<const std::int32_t> args) {
  if (args.size() > kMaxArgs) throw std::length_error("statement has too many arguments");
  Key k;
  k.label = label;
  k.arity = static_cast<std::uint8_t>(args.size());
  std::copy(args.begin(), args.end(), k.args.begin());
  return k;
}

LabelId StatementRegistry::label_id(std::string_view label) {
  if (label.empty()) throw InputError("statement label must be non-empty");
  auto it = label_ids_.find(std::string(label));
  if (it != label_ids_.end()) return it->second;
  LabelId id = static_cast<LabelId>(labels_.size());
  labels_.emplace_back(label);
  label_ids_.emplace(std::string(label), id);
  return id;
}

std::optional<LabelId> StatementRegistry::find_label(std::string_view label) const {
  auto it = label_ids_.find(std::string(label));
  if (it == label_ids_.end()) return std::nullopt;
  return it->second;
}

Statement StatementRegistry::intern(LabelId label, std::span<const std::int32_t> args) {
  Key k = make_key(label, args);
  auto [it, inserted] = ids_.try_emplace(k, static_cast<std::uint32_t>(keys_.size()));
  if (inserted) keys_.push_back(k);
  return Statement{it->second};
}

Statement StatementRegistry::intern(std::string_view label, std::span<const std::int32_t> args) {
  return intern(label_id(label), args);
}

std::optional<Statement> StatementRegistry::find(LabelId label, std::span<const std::int32_t> args) const {
  auto it = ids_.find(make_key(label, args));
  if (it == ids_.end()) return std::nullopt;
  return Statement{it->second};
}

std::optional<Statement> StatementRegistry::find(std::string_view label, std::span<const std::int32_t> args) const {
  auto l = find_label(label);
  if (!l) return std::nullopt;
  return find(*l, args);
}

std::string StatementRegistry::to_string(Statement s) const {
  std::string out(label(s));
  auto a = args(s);
  if (a.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(a[i]);
  }
  out += ')';
  return out;
}

Statement StatementRegistry::parse(std::string_view text) {
  auto open = text.find('(');
  if (open == std::string_view::npos) return intern(text, {});
  if (text.back() != ')') throw InputError("malformed statement: " + std::string(text));
  std::string_view label = text.substr(0, open);
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  std::vector<std::int32_t> args;
  while (!body.empty()) {
    auto comma = body.find(',');
    std::string_view tok = body.substr(0, comma);
    std::int32_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw InputError("malformed statement argument in: " + std::string(text));
    args.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return intern(label, args);
}

}  // namespace ld
