#pragma once

#include <array>
#include <string>

#include "amalgo/graph.hpp"

namespace amalgo {

enum class EndClass { Zero, One, Two, ThreeOrMore, Undecided };

const char* to_string(EndClass c);

/// Truncated end count. The census at inner radius r counts the components
/// of {v : r <= d(origin, v) <= R} that reach the outer sphere d = R. A census
/// is promoted to a class only if its capped value (3 means "three or more")
/// agrees at r, r+1 and r+2.
struct EndEstimate {
  std::size_t r = 0, R = 0;
  std::array<std::size_t, 3> census{};  // at r, r+1, r+2
  EndClass end_class = EndClass::Undecided;
};

EndEstimate end_count_estimate(const Graph& g, std::size_t r, std::size_t R,
                               std::size_t vertex_budget = kDefaultVertexBudget);

/// Census of a single inner radius on a precomputed window about the origin.
std::size_t end_census(const BallView& window, std::size_t r);

/// Largest minimum vertex cut, over pairs of deep components at scale r,
/// separating their parts of the outer sphere inside B_{2r}. An estimate of
/// the accessibility bound at this scale. Throws NotMultiEnded when fewer
/// than two deep components exist.
struct SeparationEstimate {
  std::size_t r = 0, R = 0;
  std::size_t components = 0;
  std::size_t cut = 0;
};

SeparationEstimate separation_profile(const Graph& g, std::size_t r,
                                      std::size_t vertex_budget = kDefaultVertexBudget);

}  // namespace amalgo
