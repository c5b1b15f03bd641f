#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amalgo/vertex.hpp"

// Small helpers for the hierarchical token scheme shared by all modules.
namespace amalgo {

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.size() > 1 && (s[0] == '0' || (s[0] == '-' && s[1] == '0'))) return std::nullopt;
  if (s == "-") return std::nullopt;
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return out;
}

inline std::optional<std::size_t> parse_nat(std::string_view s) {
  if (s.empty() || s[0] == '-') return std::nullopt;
  auto v = parse_int(s);
  if (!v) return std::nullopt;
  return static_cast<std::size_t>(*v);
}

inline std::vector<VertexId> sorted(std::vector<VertexId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Tokens accepted from user input: non-empty, no whitespace, no '|' or '"'.
inline bool is_plain_token(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == '|' || c == '"' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

/// A label that can be written verbatim inside a tree address.
inline bool is_simple_label(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           c == '_' || c == ',' || c == '+' || c == '-';
  });
}

}  // namespace amalgo
