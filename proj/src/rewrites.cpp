#include <algorithm>

#include "amalgo/amalgam.hpp"
#include "amalgo/tokens.hpp"

namespace amalgo {

// Triviality -------------------------------------------------------------------

namespace {

bool covers_whole_factor(const AmalgamSpec& spec, int side) {
  auto vs = spec.factor(side)->finite_vertices();
  if (!vs) return false;
  if (spec.mode() == AdhesionFamily::Mode::SingletonPartition) return vs->size() == 1;
  const auto& sets = spec.adhesion().sets[side - 1];
  return sets.size() == 1 && sorted(sets.front()) == *vs;
}

// True when the copy at `ref` is provably not mapped bijectively onto G.
bool copy_not_bijective(const ContractedGraph& g, const TreeAddress& ref, std::size_t radius) {
  int side = ref.side();
  auto center = g.psi(SumVertex{ref, g.spec()->factor(side)->origin()});
  auto view = ball(g, center, radius);
  for (const auto& v : view.vertices) {
    auto cls = g.class_of(v);
    auto here = std::count_if(cls->members.begin(), cls->members.end(),
                              [&](const SumVertex& m) { return m.node == ref; });
    if (here != 1) return true;
  }
  return false;
}

}  // namespace

Triviality is_trivial(SpecHandle spec, std::size_t radius) {
  Triviality out;
  out.radius = radius;
  if (covers_whole_factor(*spec, 1) || covers_whole_factor(*spec, 2)) {
    out.verdict = Triviality::Verdict::Trivial;
    return out;
  }
  auto g = contract(spec);
  TreeAddress root;
  TreeAddress first_child = root.child(spec->first_index(1));
  if (copy_not_bijective(*g, root, radius) && copy_not_bijective(*g, first_child, radius))
    out.verdict = Triviality::Verdict::Nontrivial;
  return out;
}

// Finite extension --------------------------------------------------------------

namespace {

// Star-local quotient around one copy of factor 2: the copy itself plus one
// copy of factor 1 per adhesion index l, glued along the reserved set of
// factor 1. Centre vertices are "c|y"; the remaining factor-1 vertices of the
// copy at index l are "n.<l>|x".
class StarExtension final : public Graph {
 public:
  explicit StarExtension(SpecHandle spec) : spec_(std::move(spec)) {
    origin_ = center(spec_->factor(2)->origin());
    if (auto b = spec_->factor(2)->base()) base_ = center(*b);
  }

  VertexId center(const VertexId& y) const { return VertexId("c|" + y.token); }

  /// Class of vertex x of the factor-1 copy at index l.
  VertexId leaf_class(const std::string& l, const VertexId& x) const {
    const auto& f1 = spec_->first_index(1);
    auto idx = spec_->indices_of(1, x);
    if (std::find(idx.begin(), idx.end(), f1) != idx.end())
      return center(spec_->partner(1, x, EdgeLabel{f1, l}));
    auto t = TreeAddress{{l}}.token();
    t[0] = 'n';
    return VertexId(t + "|" + x.token);
  }

  std::vector<VertexId> neighbors(const VertexId& v) const override {
    std::vector<VertexId> out;
    auto add_leaf = [&](const std::string& l, const VertexId& x) {
      for (const auto& w : spec_->factor(1)->neighbors(x)) out.push_back(leaf_class(l, w));
    };
    if (auto y = parse_center(v)) {
      for (const auto& w : spec_->factor(2)->neighbors(*y)) out.push_back(center(w));
      for (const auto& l : spec_->indices_of(2, *y))
        add_leaf(l, spec_->partner(2, *y, EdgeLabel{spec_->first_index(1), l}));
    } else if (auto leaf = parse_leaf(v)) {
      add_leaf(leaf->first, leaf->second);
    } else {
      unknown(v);
    }
    out = sorted(std::move(out));
    out.erase(std::remove(out.begin(), out.end(), v), out.end());
    return out;
  }

  bool contains(const VertexId& v) const override { return parse_center(v) || parse_leaf(v); }
  std::string kind() const override { return "extension(" + spec_->describe() + ")"; }

  std::optional<std::vector<VertexId>> finite_vertices() const override {
    auto ys = spec_->factor(2)->finite_vertices();
    auto xs = spec_->factor(1)->finite_vertices();
    if (!ys || !xs) return std::nullopt;
    std::vector<VertexId> out;
    for (const auto& y : *ys) out.push_back(center(y));
    for (const auto& l : spec_->indices(2))
      for (const auto& x : *xs) out.push_back(leaf_class(l, x));
    return sorted(std::move(out));
  }

 private:
  std::optional<VertexId> parse_center(const VertexId& v) const {
    if (v.token.rfind("c|", 0) != 0) return std::nullopt;
    VertexId y(v.token.substr(2));
    if (!spec_->factor(2)->contains(y)) return std::nullopt;
    return y;
  }

  std::optional<std::pair<std::string, VertexId>> parse_leaf(const VertexId& v) const {
    if (v.token.empty() || v.token[0] != 'n') return std::nullopt;
    std::string s = v.token;
    s[0] = 't';
    std::size_t pos = 0;
    auto t = TreeAddress::parse_prefix(s, pos);
    if (!t || t->labels.size() != 1 || pos >= s.size() || s[pos] != '|') return std::nullopt;
    const auto& l = t->labels[0];
    VertexId x(s.substr(pos + 1));
    if (!spec_->valid_index(2, l) || !spec_->factor(1)->contains(x)) return std::nullopt;
    if (leaf_class(l, x) != v) return std::nullopt;
    return std::pair{l, x};
  }

  SpecHandle spec_;
};

}  // namespace

FiniteExtension finite_extension(SpecHandle spec) {
  if (!spec->factor(1)->is_finite())
    throw Error(ErrorCode::FactorNotFinite, "finite extension needs a finite first factor");
  if (!spec->p(2))
    throw Error(ErrorCode::InvalidSpec, "finite extension needs finitely many adhesion sets");
  auto ext = std::make_shared<StarExtension>(spec);

  AdhesionFamily adh;
  const auto& f1 = spec->first_index(1);
  auto ls = spec->indices(2);
  std::vector<std::pair<std::string, std::string>> slots;  // (l, k) per new index
  for (const auto& l : ls)
    for (const auto& k : spec->indices(1))
      if (k != f1) slots.emplace_back(l, k);
  for (const auto& [l, k] : slots) {
    std::vector<VertexId> set;
    for (const auto& x : spec->adhesion_set(1, k)) set.push_back(ext->leaf_class(l, x));
    adh.sets[0].push_back(std::move(set));
  }
  for (const auto& l2 : ls) adh.sets[1].push_back(spec->adhesion_set(2, l2));
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const auto& [l, k] = slots[j];
    for (std::size_t m = 0; m < ls.size(); ++m) {
      auto& pairs = adh.bonding[{j + 1, m + 1}];
      for (const auto& x : spec->adhesion_set(1, k))
        pairs.emplace_back(ext->leaf_class(l, x), spec->partner(1, x, EdgeLabel{k, ls[m]}));
    }
  }
  auto rewritten = std::make_shared<AmalgamSpec>(
      AmalgamSpec::make(ext, spec->factor(2), std::move(adh), spec->identification_budget()));
  return {ext, rewritten, TreeAddress{}.child(f1)};
}

// Base-point amalgam and wedge ---------------------------------------------------

SpecHandle base_point_amalgam(GraphHandle g1, GraphHandle g2) {
  AdhesionFamily adh;
  adh.mode = AdhesionFamily::Mode::SingletonPartition;
  return std::make_shared<AmalgamSpec>(AmalgamSpec::make(std::move(g1), std::move(g2), std::move(adh)));
}

namespace {

class Wedge final : public Graph {
 public:
  explicit Wedge(std::vector<GraphHandle> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw Error(ErrorCode::InvalidSpec, "wedge of no graphs");
    for (std::size_t i = 0; i < parts_.size(); ++i)
      if (!parts_[i]->base())
        throw Error(ErrorCode::MissingBase, "wedge part " + std::to_string(i + 1) + " has no base vertex");
    origin_ = tag(0, *parts_[0]->base());
    base_ = origin_;
  }

  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto [i, x] = split(v);
    std::vector<VertexId> out;
    for (const auto& w : parts_[i]->neighbors(x)) out.push_back(tag(i, w));
    if (x == *parts_[i]->base()) {
      if (i == 0) {
        for (std::size_t j = 1; j < parts_.size(); ++j) out.push_back(tag(j, *parts_[j]->base()));
      } else {
        out.push_back(origin_);
      }
    }
    return sorted(std::move(out));
  }

  bool contains(const VertexId& v) const override {
    auto colon = v.token.find(':');
    if (colon == std::string::npos) return false;
    auto i = parse_nat(std::string_view(v.token).substr(0, colon));
    return i && *i >= 1 && *i <= parts_.size() &&
           parts_[*i - 1]->contains(VertexId(v.token.substr(colon + 1)));
  }

  std::string kind() const override {
    std::string out = "wedge(";
    for (std::size_t i = 0; i < parts_.size(); ++i) out += (i ? ", " : "") + parts_[i]->kind();
    return out + ")";
  }

  std::optional<std::vector<VertexId>> finite_vertices() const override {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      auto vs = parts_[i]->finite_vertices();
      if (!vs) return std::nullopt;
      for (const auto& v : *vs) out.push_back(tag(i, v));
    }
    return sorted(std::move(out));
  }

 private:
  static VertexId tag(std::size_t i, const VertexId& v) {
    return VertexId(std::to_string(i + 1) + ":" + v.token);
  }
  std::pair<std::size_t, VertexId> split(const VertexId& v) const {
    if (!contains(v)) unknown(v);
    auto colon = v.token.find(':');
    return {*parse_nat(std::string_view(v.token).substr(0, colon)) - 1, VertexId(v.token.substr(colon + 1))};
  }

  std::vector<GraphHandle> parts_;
};

}  // namespace

GraphHandle wedge(const std::vector<GraphHandle>& parts) { return std::make_shared<Wedge>(parts); }

}  // namespace amalgo
