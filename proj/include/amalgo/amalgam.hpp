#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "amalgo/graph.hpp"

namespace amalgo {

inline constexpr std::size_t kDefaultIdentificationBudget = 10'000;

/// Path from the root of the amalgamation tree, one adhesion-index label per
/// step. Even length means the node lies in V1 (hosts a copy of factor 1).
struct TreeAddress {
  std::vector<std::string> labels;

  bool is_root() const noexcept { return labels.empty(); }
  int side() const noexcept { return labels.size() % 2 == 0 ? 1 : 2; }
  std::size_t depth() const noexcept { return labels.size(); }
  TreeAddress parent() const;
  TreeAddress child(std::string label) const;

  /// "t", "t.2", "t.2.1", ...; labels outside [A-Za-z0-9_,+-] are written
  /// length-prefixed as "#<len>:<label>".
  std::string token() const;
  /// Parses an address at the front of `s`, advancing `pos`.
  static std::optional<TreeAddress> parse_prefix(std::string_view s, std::size_t& pos);
  static std::optional<TreeAddress> parse(std::string_view s);

  friend bool operator==(const TreeAddress&, const TreeAddress&) = default;
  friend std::strong_ordering operator<=>(const TreeAddress& a, const TreeAddress& b);
};

std::size_t tree_distance(const TreeAddress& a, const TreeAddress& b);

/// Edge label (k, l): k indexes an adhesion set of factor 1, l one of factor 2.
struct EdgeLabel {
  std::string k, l;
  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

struct TreeEdge {
  TreeAddress to;
  EdgeLabel label;
};

/// Adhesion sets of both factors plus the bonding bijections.
///
/// Explicit mode lists the sets; indices are "1".."p_i" and the bijection for
/// a label (k, l) maps set k of factor 1 onto set l of factor 2. SingletonPartition mode is the
/// base-point construction: every vertex is its own adhesion set, the index
/// label is the vertex token and the base vertex plays the role of index 1.
struct AdhesionFamily {
  enum class Mode { Explicit, SingletonPartition };
  Mode mode = Mode::Explicit;
  std::array<std::vector<std::vector<VertexId>>, 2> sets;
  /// Keyed by 1-based (k, l). Missing pairs default to the positional bijection.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<VertexId, VertexId>>> bonding;
};

/// Full presentation of a tree amalgamation with the canonical labeling: at a
/// V_i node the child edges take the i-coordinates in increasing order and, at
/// non-root nodes, the parent edge takes i-coordinate 1; the other coordinate
/// of a child edge is 1 (the child's reserved index).
class AmalgamSpec {
 public:
  static AmalgamSpec make(GraphHandle factor1, GraphHandle factor2, AdhesionFamily adhesion,
                          std::size_t identification_budget = kDefaultIdentificationBudget);

  const GraphHandle& factor(int side) const { return factors_[side - 1]; }
  const AdhesionFamily& adhesion() const noexcept { return adhesion_; }
  AdhesionFamily::Mode mode() const noexcept { return adhesion_.mode; }
  std::size_t identification_budget() const noexcept { return id_budget_; }

  /// Number of adhesion sets of a factor; nullopt when infinite.
  std::optional<std::size_t> p(int side) const;
  /// The reserved index label of a side ("1", or the base vertex token).
  const std::string& first_index(int side) const { return first_[side - 1]; }
  /// All index labels of a side in canonical order. Throws when infinite.
  std::vector<std::string> indices(int side) const;
  bool valid_index(int side, const std::string& label) const;
  /// Index labels of the adhesion sets of `side` containing x.
  std::vector<std::string> indices_of(int side, const VertexId& x) const;
  std::vector<VertexId> adhesion_set(int side, const std::string& label) const;
  /// Image of x (on `side`) under the bonding bijection of `label`.
  VertexId partner(int side, const VertexId& x, const EdgeLabel& label) const;

  std::string describe() const;

 private:
  std::array<GraphHandle, 2> factors_;
  AdhesionFamily adhesion_;
  std::array<std::string, 2> first_;
  std::size_t id_budget_ = kDefaultIdentificationBudget;
  std::array<std::unordered_map<VertexId, std::vector<std::string>>, 2> membership_;
  // (k,l) -> forward / backward maps
  std::map<std::pair<std::size_t, std::size_t>, std::unordered_map<VertexId, VertexId>> forward_, backward_;
};

using SpecHandle = std::shared_ptr<const AmalgamSpec>;

// Tree structure -------------------------------------------------------------

bool valid_address(const AmalgamSpec& spec, const TreeAddress& t);
/// Labeled edges at a tree node: parent first (if any), then children.
std::vector<TreeEdge> tree_neighbors(const AmalgamSpec& spec, const TreeAddress& t);
/// The semiregular tree itself as a graph over address tokens.
GraphHandle amalgamation_tree(SpecHandle spec);

// Sum graph and contraction ---------------------------------------------------

/// A vertex of the sum graph: a factor vertex inside the copy at a tree node.
struct SumVertex {
  TreeAddress node;
  VertexId vertex;

  std::string token() const { return node.token() + "|" + vertex.token; }
  static std::optional<SumVertex> parse(const std::string& token);
  friend bool operator==(const SumVertex&, const SumVertex&) = default;
  friend std::strong_ordering operator<=>(const SumVertex& a, const SumVertex& b);
};

/// Bridging edges of a sum-graph vertex.
std::vector<SumVertex> bridges(const AmalgamSpec& spec, const SumVertex& x);

GraphHandle sum_graph(SpecHandle spec);

/// Identification class: the members joined by bridging edges.
struct IdClass {
  std::vector<SumVertex> members;  // sorted; front() is the representative
  const SumVertex& representative() const { return members.front(); }
};

/// G1 * G2: vertices are identification classes, named by the token of their
/// lexicographically least member.
class ContractedGraph final : public Graph {
 public:
  explicit ContractedGraph(SpecHandle spec);

  std::vector<VertexId> neighbors(const VertexId& v) const override;
  bool contains(const VertexId& v) const override;
  std::string kind() const override;

  const SpecHandle& spec() const noexcept { return spec_; }
  /// The contraction map from the sum graph.
  VertexId psi(const VertexId& sum_vertex) const;
  VertexId psi(const SumVertex& x) const;
  std::shared_ptr<const IdClass> class_of(const SumVertex& x) const;
  std::shared_ptr<const IdClass> class_of(const VertexId& contracted) const;

 private:
  SpecHandle spec_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, std::shared_ptr<const IdClass>> cache_;
};

std::shared_ptr<const ContractedGraph> contract(SpecHandle spec);

struct Identification {
  std::size_t size = 0;    // tree nodes hosting the class
  std::size_t length = 0;  // diameter of that subtree
};
Identification identification(const ContractedGraph& g, const VertexId& x);

// Structural predicates and rewrites -----------------------------------------

struct Triviality {
  enum class Verdict { Trivial, Nontrivial, Unknown };
  Verdict verdict = Verdict::Unknown;
  std::size_t radius = 0;
};
/// Trivial only via the sufficient condition (p_i = 1 with V(G_i) as the only
/// adhesion set); nontrivial when a probe of radius r shows that a reference
/// copy of each factor is not mapped bijectively by psi.
Triviality is_trivial(SpecHandle spec, std::size_t radius = 4);

struct FiniteExtension {
  GraphHandle extension;
  SpecHandle rewritten;
  /// Address of the star centre in the original tree; the rewritten root copy
  /// corresponds to it.
  TreeAddress center;
};
FiniteExtension finite_extension(SpecHandle spec);

/// G1 +_{v1,v2} G2 from two pointed graphs.
SpecHandle base_point_amalgam(GraphHandle g1, GraphHandle g2);

/// Disjoint union of pointed graphs, base of part 1 joined to every other
/// base. Tokens are "<part>:<token>" with parts numbered from 1.
GraphHandle wedge(const std::vector<GraphHandle>& parts);

}  // namespace amalgo
