#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace amalgo {

/// Opaque vertex identity. The token is the canonical serialized form, so
/// equality and ordering are plain string comparisons and round-trip exactly.
struct VertexId {
  std::string token;

  VertexId() = default;
  explicit VertexId(std::string t) : token(std::move(t)) {}

  const std::string& str() const noexcept { return token; }

  friend bool operator==(const VertexId&, const VertexId&) = default;
  friend std::strong_ordering operator<=>(const VertexId& a, const VertexId& b) {
    return a.token <=> b.token;
  }
  friend std::ostream& operator<<(std::ostream& os, const VertexId& v) {
    return os << v.token;
  }
};

}  // namespace amalgo

template <>
struct std::hash<amalgo::VertexId> {
  std::size_t operator()(const amalgo::VertexId& v) const noexcept {
    return std::hash<std::string>{}(v.token);
  }
};
