#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "amalgo/amalgam.hpp"
#include "amalgo/ends.hpp"

namespace amalgo {

using Rational = boost::rational<std::int64_t>;

/// "3" or "3/2".
std::string to_string(const Rational& q);

/// gamma^-1 d(u,v) - c <= d(f u, f v) <= gamma d(u,v) + c, and every target
/// vertex lies within density_c of the image.
struct QiConstants {
  Rational gamma{1};
  Rational c{0};
  Rational density_c{0};
};

/// A vertex map between two graph handles together with the constants it
/// claims. The function must be pure and safe to call from several threads.
class QiMap {
 public:
  using Fn = std::function<VertexId(const VertexId&)>;

  QiMap(GraphHandle source, GraphHandle target, Fn fn, QiConstants claimed, std::string tag);

  VertexId operator()(const VertexId& v) const { return fn_(v); }
  const GraphHandle& source() const noexcept { return source_; }
  const GraphHandle& target() const noexcept { return target_; }
  const QiConstants& claimed() const noexcept { return claimed_; }
  const std::string& tag() const noexcept { return tag_; }
  QiMap with_claim(QiConstants claimed) const;

 private:
  GraphHandle source_, target_;
  Fn fn_;
  QiConstants claimed_;
  std::string tag_;
};

QiMap identity_map(GraphHandle g);

/// g after f. Throws MismatchedEndpoint unless f.target() is g.source().
QiMap compose(const QiMap& f, const QiMap& g);
QiConstants compose(const QiConstants& f, const QiConstants& g);

/// Header with the claimed constants, then one "<source> -> <target>" line
/// per vertex of the source ball of radius r, sorted by source token.
std::string export_map(const QiMap& f, std::size_t r,
                       std::size_t vertex_budget = kDefaultVertexBudget);

// Quantities the claims are derived from ----------------------------------------

std::size_t graph_diameter(const Graph& finite_graph);
/// Largest diameter (in its factor) of any adhesion set.
std::size_t adhesion_diameter(const AmalgamSpec& spec);

struct IdentificationStats {
  std::size_t size = 0;     // max tree nodes per class
  std::size_t length = 0;   // max subtree diameter
  std::size_t members = 0;  // max sum vertices per class
};
IdentificationStats identification_stats(const ContractedGraph& g, std::size_t radius);

// Constructions -------------------------------------------------------------------

/// The contraction sum_graph(spec) -> contract(spec).
QiMap psi_map(SpecHandle spec, std::size_t probe_radius = 8);
/// Same, over given handles (for composition with other maps on them).
QiMap psi_map(GraphHandle sum, std::shared_ptr<const ContractedGraph> contracted,
              std::size_t probe_radius = 8);
/// contract(spec) -> sum_graph(spec), a class to its representative member.
QiMap representative_map(std::shared_ptr<const ContractedGraph> contracted, GraphHandle sum,
                         std::size_t probe_radius = 8);
/// sum_graph(spec) -> amalgamation tree, each copy onto its node.
QiMap tree_collapse_map(SpecHandle spec);

/// Path system placing a locally finite tree with all degrees >= 3 into the
/// 3-regular tree: vertex x owns a path of d(x) - 2 vertices, and its children
/// start at the free neighbours of that path in order.
class CubicPathSystem {
 public:
  explicit CubicPathSystem(GraphHandle tree);
  ~CubicPathSystem();
  const GraphHandle& target() const noexcept { return target_; }
  std::vector<VertexId> path(const VertexId& x) const;
  VertexId image(const VertexId& x) const;

 private:
  struct State;
  GraphHandle tree_, target_;
  std::unique_ptr<State> state_;
};

/// Reduce a tree to its branch vertices: prune finite branches (detected to
/// depth `prune_depth`) and suppress vertices with two infinite branches.
/// Each vertex maps to its nearest branch vertex.
QiMap reduce_tree_map(GraphHandle tree, std::size_t probe_radius = 6, std::size_t prune_depth = 6);

/// tree -> regtree(3). Reduces the tree first when the probe finds a vertex of
/// degree < 3.
QiMap cubic_tree_map(GraphHandle tree, std::size_t probe_radius = 6, std::size_t prune_depth = 6);

/// sum_graph(spec) -> graph on the factor-2 copies in which bridge targets of
/// a common factor-1 copy are adjacent. Requires factor 1 finite and factor 2
/// infinite.
QiMap absorb_finite_factor(SpecHandle spec);

struct TreeFactorisation {
  GraphHandle tree;                  // the constructed tree
  QiMap to_tree;                     // graph -> tree
  std::optional<EndEstimate> probe;  // ends of the tree (not probed for a finite leaf)
  bool cubic_applied = false;
  QiMap map;                         // to_tree, or to_tree then the cubic step
};

/// Recursive tree for an iterated amalgam of finite graphs. `g` is a finite
/// graph or a contracted amalgam whose factors are again of this form.
TreeFactorisation tree_factorisation_map(GraphHandle g, std::size_t probe_radius = 6);

struct AdhesionClauses {
  bool single_vertex = false;  // every adhesion set has one vertex
  bool distinct = false;       // no two adhesion sets of a factor coincide
  bool covering = false;       // every factor vertex lies in an adhesion set
  bool all() const { return single_vertex && distinct && covering; }
};
AdhesionClauses check_clauses(const AmalgamSpec& spec);

struct NormalizedSpec {
  SpecHandle spec;
  std::vector<SpecHandle> stage_specs;  // after stages 1, 2, 3
  std::vector<QiMap> stages;            // sum-graph maps, one per stage
  QiMap forward;                        // contract(original) -> contract(spec)
  std::vector<QiMap> factor_maps;       // original factor i -> new factor i
};

/// Rewrite a spec with finite factors into one whose adhesion sets are
/// distinct single vertices covering both factors.
NormalizedSpec adhesion_normalize(SpecHandle spec, std::size_t probe_radius = 6);

}  // namespace amalgo
