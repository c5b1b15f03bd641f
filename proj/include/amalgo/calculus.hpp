#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace amalgo {

enum class EndCount { Finite, One, Two, Infinite };
/// "0", "1", "2", "inf".
const char* to_string(EndCount e);

/// A leaf names a quasi-isometry type. Equal names denote the same type and
/// must carry the same attributes.
struct QiTypeLabel {
  std::string name;
  EndCount ends = EndCount::One;
  std::optional<bool> accessible;  // unset: true unless infinitely-ended

  bool operator==(const QiTypeLabel&) const = default;
  auto operator<=>(const QiTypeLabel&) const = default;
};

struct FactorisationTree;
using FTree = std::shared_ptr<const FactorisationTree>;

/// A leaf, or a tree amalgamation of two subtrees. Node flags are always
/// explicit; `ends` and `accessible` describe the node's graph and may be left
/// open for the calculus to derive.
struct FactorisationTree {
  struct Node {
    FTree left, right;
    bool nontrivial;
    bool finite_adhesion;
    bool star;
    std::optional<EndCount> ends;
    std::optional<bool> accessible;
  };
  std::variant<QiTypeLabel, Node> value;

  bool is_leaf() const { return std::holds_alternative<QiTypeLabel>(value); }
  const QiTypeLabel& label() const { return std::get<QiTypeLabel>(value); }
  const Node& node() const { return std::get<Node>(value); }
};

FTree leaf(std::string name, EndCount ends, std::optional<bool> accessible = std::nullopt);
FTree node(FTree left, FTree right, bool nontrivial, bool finite_adhesion, bool star,
           std::optional<EndCount> ends = std::nullopt, std::optional<bool> accessible = std::nullopt);

std::vector<QiTypeLabel> leaves(const FTree& ft);
bool structurally_equal(const FTree& a, const FTree& b);
/// Compact one-line rendering, e.g. "(a:1 * F:0)[nt,fa]".
std::string render(const FTree& ft);

/// Throws NamespaceInconsistency if one name carries two different end
/// classes or accessibility flags across the given trees.
void check_namespace(const std::vector<FTree>& trees);

bool is_terminal(const FTree& ft);
/// Names of leaves with at least one end.
std::set<std::string> infinite_type_set(const FTree& ft);
std::set<std::string> one_ended_set(const FTree& ft);

/// End class of the root: the leaf's, the supplied value, or derived for a
/// non-trivial, finite-adhesion, non-star root that has an infinite leaf or
/// whose leaves are all finite below non-trivial non-star nodes.
std::optional<EndCount> root_ends(const FTree& ft);
/// Supplied, a leaf's own, or true for terminal trees.
std::optional<bool> root_accessible(const FTree& ft);

struct Classification {
  enum class Kind { TreeClass, FreeLike };
  Kind kind = Kind::TreeClass;
  int shape_case = 3;                // 1, 2 or 3
  std::vector<QiTypeLabel> types;      // one label per infinite type, by name
  bool finite_marker = false;          // case 2 adds a finite factor

  bool operator==(const Classification&) const = default;
};
std::string render(const Classification& c);

/// Requires a root with infinitely many ends (NotInfinitelyManyEnds when the
/// root is known to have 0, 1 or 2, EndClassUndetermined when unknown).
Classification normal_form(const FTree& ft);
/// A small tree realising a classification.
FTree rebuild(const Classification& c);

enum class Verdict { Equivalent, NotEquivalent, Unknown };
const char* to_string(Verdict v);

struct Decision {
  Verdict verdict = Verdict::Unknown;
  std::string rule;  // which rule decided, for reports
};
Decision decide_qi(const FTree& g, const FTree& h);

}  // namespace amalgo
