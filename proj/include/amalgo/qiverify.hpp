#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "amalgo/qimaps.hpp"

namespace amalgo {

inline constexpr std::size_t kDefaultPairBudget = 10'000'000;

struct VerifyOptions {
  std::size_t vertex_budget = kDefaultVertexBudget;
  std::size_t pair_budget = kDefaultPairBudget;
  unsigned jobs = 1;  // 0: one per hardware thread
};

struct Witness {
  enum class Kind { Upper, Lower, Density };
  Kind kind = Kind::Upper;
  VertexId u;                    // source vertex, or the uncovered target vertex
  std::optional<VertexId> v;     // second source vertex of a pair
  std::size_t source_distance = 0;
  std::size_t target_distance = 0;  // d_H of the images, or distance to the image
};
const char* to_string(Witness::Kind k);
std::string describe(const Witness& w);

struct DistortionReport {
  std::size_t radius = 0;
  std::size_t pairs = 0;       // pairs evaluated
  bool sampled = false;        // pair budget forced sampling
  QiConstants claimed;
  Rational upper_ratio{0};     // max dH/dG
  Rational gamma_hat{1};       // max of dH/dG and dG/dH (pairs with dH = 0 skip the second)
  Rational c_hat{0};           // least additive slack at the claimed gamma
  Rational density_hat{0};     // max distance of an interior target vertex to the image
  std::optional<std::size_t> density_radius;  // interior radius checked, if any
  bool pass = true;
  std::optional<Witness> witness;
};

/// All pairs of the source ball of radius r about the source origin, with
/// exact distances on both sides.
DistortionReport measure_distortion(const QiMap& f, std::size_t r, const VerifyOptions& opt = {});

struct ClaimResult {
  bool pass = true;
  std::vector<DistortionReport> reports;  // up to and including the first failing radius
  std::optional<Witness> witness;
  std::optional<std::size_t> failed_radius;
};

/// Radii must be nonempty and strictly increasing.
ClaimResult check_claim(const QiMap& f, const std::vector<std::size_t>& radii, const VerifyOptions& opt = {});
/// check_claim with c and density forced to 0 (hence injective and onto the
/// interior).
ClaimResult bilipschitz_check(const QiMap& f, const std::vector<std::size_t>& radii,
                              const VerifyOptions& opt = {});

struct UnvaryingWitness {
  Rational gamma{1};
  std::string how;
  QiMap map;
};

/// Automorphism of a built-in generator taking u to v, when its symmetry is
/// known: translations of doubleray and grid2d, re-rooting of regular and
/// semiregular trees between vertices of equal degree.
std::optional<UnvaryingWitness> unvarying_probe(GraphHandle g, const VertexId& u, const VertexId& v,
                                                std::size_t r);

}  // namespace amalgo
