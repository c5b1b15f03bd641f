#pragma once

#include <optional>
#include <vector>

#include "amalgo/graph.hpp"

namespace amalgo {

/// Center-preserving isomorphism between two balls (same radius), respecting
/// distance layers, induced adjacency and host degree. Returns the map from
/// indices of `a` to indices of `b`, or nullopt if none exists.
std::optional<std::vector<std::size_t>> rooted_isomorphism(const BallView& a, const BallView& b);

}  // namespace amalgo
