#include <algorithm>
#include <map>
#include <mutex>

#include "amalgo/qimaps.hpp"
#include "amalgo/tokens.hpp"

namespace amalgo {

namespace {

Rational rat(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

// Every amalgamation-tree node u replaced by a copy of the tree built for the
// factor at u. A tree edge labelled (k, l) becomes one edge between the images
// of x = min of adhesion set k of factor 1 and its partner in set l of factor 2. Tokens are "<address>|<inner>".
class ReplacedTree final : public Graph {
 public:
  ReplacedTree(SpecHandle spec, std::array<QiMap, 2> inner) : spec_(std::move(spec)), inner_(std::move(inner)) {
    origin_ = tag(TreeAddress{}, inner_[0].target()->origin());
  }

  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto [u, a] = split(v);
    int side = u.side();
    std::vector<VertexId> out;
    for (const auto& w : inner_[side - 1].target()->neighbors(a)) out.push_back(tag(u, w));
    for (const auto& e : tree_neighbors(*spec_, u)) {
      auto [a1, a2] = attachment(e.label);
      if ((side == 1 ? a1 : a2) == a) out.push_back(tag(e.to, side == 1 ? a2 : a1));
    }
    return sorted(std::move(out));
  }

  bool contains(const VertexId& v) const override {
    std::size_t pos = 0;
    auto u = TreeAddress::parse_prefix(v.token, pos);
    if (!u || pos >= v.token.size() || v.token[pos] != '|' || !valid_address(*spec_, *u)) return false;
    return inner_[u->side() - 1].target()->contains(VertexId(v.token.substr(pos + 1)));
  }

  std::string kind() const override { return "replaced-tree(" + spec_->describe() + ")"; }

  static VertexId tag(const TreeAddress& u, const VertexId& a) { return VertexId(u.token() + "|" + a.token); }

  std::pair<VertexId, VertexId> attachment(const EdgeLabel& label) const {
    auto key = std::pair{label.k, label.l};
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    auto set = spec_->adhesion_set(1, label.k);
    auto x = *std::min_element(set.begin(), set.end());
    auto y = spec_->partner(1, x, label);
    std::pair result{inner_[0](x), inner_[1](y)};
    std::lock_guard lock(mutex_);
    return memo_.emplace(key, result).first->second;
  }

 private:
  std::pair<TreeAddress, VertexId> split(const VertexId& v) const {
    if (!contains(v)) unknown(v);
    std::size_t pos = 0;
    auto u = TreeAddress::parse_prefix(v.token, pos);
    return {*u, VertexId(v.token.substr(pos + 1))};
  }

  SpecHandle spec_;
  std::array<QiMap, 2> inner_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<std::string, std::string>, std::pair<VertexId, VertexId>> memo_;
};

QiMap leaf_map(GraphHandle g) {
  auto diam = rat(graph_diameter(*g));
  auto point = explicit_graph({VertexId("o")}, {}, "point");
  return QiMap(std::move(g), std::move(point),
               [](const VertexId&) { return VertexId("o"); }, {1, diam, 0}, "collapse-leaf");
}

QiMap to_tree_map(GraphHandle g, std::size_t probe_radius) {
  if (g->is_finite()) return leaf_map(std::move(g));
  auto contracted = std::dynamic_pointer_cast<const ContractedGraph>(g);
  if (!contracted) {
    if (auto* c = dynamic_cast<const ContractedGraph*>(&g->underlying()))
      contracted = std::shared_ptr<const ContractedGraph>(g, c);
  }
  if (!contracted)
    throw Error(ErrorCode::FactorNotFinite, g->kind() + " is neither finite nor an amalgam of finite graphs");
  const auto& spec = contracted->spec();
  std::array<QiMap, 2> inner{to_tree_map(spec->factor(1), probe_radius),
                             to_tree_map(spec->factor(2), probe_radius)};

  Rational gamma = std::max(inner[0].claimed().gamma, inner[1].claimed().gamma);
  Rational c = std::max(inner[0].claimed().c, inner[1].claimed().c);
  Rational d = std::max(inner[0].claimed().density_c, inner[1].claimed().density_c);
  auto L = rat(identification_stats(*contracted, probe_radius).length);
  auto D = rat(adhesion_diameter(*spec));
  // Cost in the constructed tree of crossing one bridge of an identification class.
  auto bridge = 2 * (gamma * D + c) + 1;
  QiConstants claim{std::max(2 * L * bridge + gamma + c, gamma * (1 + c)), gamma * c, d + L * bridge};

  auto tree = std::make_shared<ReplacedTree>(spec, inner);
  auto in = inner;
  return QiMap(contracted, std::move(tree),
               [contracted, in](const VertexId& v) {
                 auto rep = contracted->class_of(v)->representative();
                 return ReplacedTree::tag(rep.node, in[rep.node.side() - 1](rep.vertex));
               },
               claim, "tree-factorisation");
}

}  // namespace

TreeFactorisation tree_factorisation_map(GraphHandle g, std::size_t probe_radius) {
  auto to_tree = to_tree_map(std::move(g), probe_radius);
  TreeFactorisation out{to_tree.target(), to_tree, std::nullopt, false, to_tree};
  if (out.tree->is_finite()) return out;
  out.probe = end_count_estimate(*out.tree, 3, 9);
  if (out.probe->end_class == EndClass::ThreeOrMore) {
    out.map = compose(to_tree, cubic_tree_map(out.tree, probe_radius));
    out.cubic_applied = true;
  }
  return out;
}

}  // namespace amalgo
