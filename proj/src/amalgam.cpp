#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "amalgo/amalgam.hpp"
#include "amalgo/tokens.hpp"

namespace amalgo {

namespace {

// Numeric labels compare as numbers, everything else as strings; numbers first.
std::strong_ordering label_cmp(const std::string& a, const std::string& b) {
  auto na = parse_int(a), nb = parse_int(b);
  if (na && nb) return *na <=> *nb;
  if (na) return std::strong_ordering::less;
  if (nb) return std::strong_ordering::greater;
  return a <=> b;
}

std::string index_label(std::size_t k) { return std::to_string(k); }

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); }

}  // namespace

// TreeAddress ----------------------------------------------------------------

TreeAddress TreeAddress::parent() const {
  if (is_root()) throw Error(ErrorCode::Internal, "root has no parent");
  TreeAddress out{labels};
  out.labels.pop_back();
  return out;
}

TreeAddress TreeAddress::child(std::string label) const {
  TreeAddress out{labels};
  out.labels.push_back(std::move(label));
  return out;
}

std::string TreeAddress::token() const {
  std::string out = "t";
  for (const auto& l : labels) {
    out += '.';
    if (is_simple_label(l))
      out += l;
    else
      out += "#" + std::to_string(l.size()) + ":" + l;
  }
  return out;
}

std::optional<TreeAddress> TreeAddress::parse_prefix(std::string_view s, std::size_t& pos) {
  if (pos >= s.size() || s[pos] != 't') return std::nullopt;
  std::size_t i = pos + 1;
  TreeAddress out;
  while (i < s.size() && s[i] == '.') {
    ++i;
    if (i < s.size() && s[i] == '#') {
      auto colon = s.find(':', i);
      if (colon == std::string_view::npos) return std::nullopt;
      auto len = parse_nat(s.substr(i + 1, colon - i - 1));
      if (!len || *len == 0 || colon + 1 + *len > s.size()) return std::nullopt;
      std::string label(s.substr(colon + 1, *len));
      if (is_simple_label(label)) return std::nullopt;  // not canonical
      out.labels.push_back(std::move(label));
      i = colon + 1 + *len;
    } else {
      std::size_t j = i;
      while (j < s.size() && s[j] != '.' && s[j] != '|') ++j;
      std::string label(s.substr(i, j - i));
      if (!is_simple_label(label)) return std::nullopt;
      out.labels.push_back(std::move(label));
      i = j;
    }
  }
  pos = i;
  return out;
}

std::optional<TreeAddress> TreeAddress::parse(std::string_view s) {
  std::size_t pos = 0;
  auto t = parse_prefix(s, pos);
  if (!t || pos != s.size()) return std::nullopt;
  return t;
}

std::strong_ordering operator<=>(const TreeAddress& a, const TreeAddress& b) {
  auto n = std::min(a.labels.size(), b.labels.size());
  for (std::size_t i = 0; i < n; ++i)
    if (auto c = label_cmp(a.labels[i], b.labels[i]); c != 0) return c;
  return a.labels.size() <=> b.labels.size();
}

std::size_t tree_distance(const TreeAddress& a, const TreeAddress& b) {
  std::size_t common = 0;
  while (common < a.labels.size() && common < b.labels.size() &&
         a.labels[common] == b.labels[common])
    ++common;
  return a.labels.size() + b.labels.size() - 2 * common;
}

std::strong_ordering operator<=>(const SumVertex& a, const SumVertex& b) {
  if (auto c = a.node <=> b.node; c != 0) return c;
  return a.vertex <=> b.vertex;
}

std::optional<SumVertex> SumVertex::parse(const std::string& token) {
  std::size_t pos = 0;
  auto t = TreeAddress::parse_prefix(token, pos);
  if (!t || pos >= token.size() || token[pos] != '|' || pos + 1 == token.size())
    return std::nullopt;
  return SumVertex{std::move(*t), VertexId(token.substr(pos + 1))};
}

// AmalgamSpec ----------------------------------------------------------------

AmalgamSpec AmalgamSpec::make(GraphHandle factor1, GraphHandle factor2, AdhesionFamily adhesion,
                              std::size_t identification_budget) {
  if (!factor1 || !factor2) invalid("both factors are required");
  AmalgamSpec s;
  s.factors_ = {std::move(factor1), std::move(factor2)};
  s.id_budget_ = identification_budget;

  if (adhesion.mode == AdhesionFamily::Mode::SingletonPartition) {
    for (int i = 1; i <= 2; ++i) {
      const auto& base = s.factor(i)->base();
      if (!base)
        throw Error(ErrorCode::MissingBase,
                    "factor " + std::to_string(i) + " (" + s.factor(i)->kind() + ") has no base vertex");
      if (!s.factor(i)->contains(*base)) invalid("base vertex not in factor");
      s.first_[i - 1] = base->token;
    }
    s.adhesion_ = std::move(adhesion);
    return s;
  }

  std::size_t card = 0;
  for (int i = 1; i <= 2; ++i) {
    const auto& sets = adhesion.sets[i - 1];
    if (sets.empty()) invalid("factor " + std::to_string(i) + " needs at least one adhesion set");
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const auto& set = sets[k];
      if (set.empty()) invalid("adhesion sets must be non-empty");
      if (card == 0) card = set.size();
      if (set.size() != card) invalid("all adhesion sets must have the same cardinality");
      if (sorted(set).size() != set.size()) invalid("adhesion set lists a vertex twice");
      for (const auto& x : set) {
        if (!s.factor(i)->contains(x))
          invalid("adhesion vertex '" + x.token + "' is not in factor " + std::to_string(i));
        s.membership_[i - 1][x].push_back(index_label(k + 1));
      }
    }
    s.first_[i - 1] = "1";
  }

  const auto& s1 = adhesion.sets[0];
  const auto& s2 = adhesion.sets[1];
  for (const auto& [key, pairs] : adhesion.bonding) {
    auto [k, l] = key;
    if (k < 1 || k > s1.size() || l < 1 || l > s2.size())
      invalid("bonding refers to a missing adhesion set (" + std::to_string(k) + "," + std::to_string(l) + ")");
    std::vector<VertexId> dom, cod;
    for (const auto& [a, b] : pairs) dom.push_back(a), cod.push_back(b);
    if (dom.size() != card || sorted(dom) != sorted(s1[k - 1]) || sorted(cod) != sorted(s2[l - 1]) ||
        sorted(cod).size() != cod.size())
      invalid("bonding (" + std::to_string(k) + "," + std::to_string(l) + ") is not a bijection between the adhesion sets");
  }
  for (std::size_t k = 1; k <= s1.size(); ++k)
    for (std::size_t l = 1; l <= s2.size(); ++l) {
      auto& fw = s.forward_[{k, l}];
      auto& bw = s.backward_[{k, l}];
      auto it = adhesion.bonding.find({k, l});
      if (it != adhesion.bonding.end()) {
        for (const auto& [a, b] : it->second) fw.emplace(a, b), bw.emplace(b, a);
      } else {
        for (std::size_t j = 0; j < card; ++j)
          fw.emplace(s1[k - 1][j], s2[l - 1][j]), bw.emplace(s2[l - 1][j], s1[k - 1][j]);
      }
    }
  s.adhesion_ = std::move(adhesion);
  return s;
}

std::optional<std::size_t> AmalgamSpec::p(int side) const {
  if (mode() == AdhesionFamily::Mode::Explicit) return adhesion_.sets[side - 1].size();
  auto vs = factor(side)->finite_vertices();
  if (!vs) return std::nullopt;
  return vs->size();
}

std::vector<std::string> AmalgamSpec::indices(int side) const {
  std::vector<std::string> out;
  if (mode() == AdhesionFamily::Mode::Explicit) {
    for (std::size_t k = 1; k <= adhesion_.sets[side - 1].size(); ++k) out.push_back(index_label(k));
    return out;
  }
  auto vs = factor(side)->finite_vertices();
  if (!vs)
    throw Error(ErrorCode::FactorNotFinite,
                "factor " + std::to_string(side) + " has infinitely many adhesion sets");
  out.push_back(first_index(side));
  std::vector<std::string> rest;
  for (const auto& v : *vs)
    if (v.token != first_index(side)) rest.push_back(v.token);
  std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return label_cmp(a, b) < 0; });
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

bool AmalgamSpec::valid_index(int side, const std::string& label) const {
  if (mode() == AdhesionFamily::Mode::Explicit) {
    auto k = parse_nat(label);
    return k && *k >= 1 && *k <= adhesion_.sets[side - 1].size();
  }
  return factor(side)->contains(VertexId(label));
}

std::vector<std::string> AmalgamSpec::indices_of(int side, const VertexId& x) const {
  if (mode() == AdhesionFamily::Mode::SingletonPartition) return {x.token};
  auto it = membership_[side - 1].find(x);
  if (it == membership_[side - 1].end()) return {};
  return it->second;
}

std::vector<VertexId> AmalgamSpec::adhesion_set(int side, const std::string& label) const {
  if (!valid_index(side, label)) invalid("no adhesion set '" + label + "'");
  if (mode() == AdhesionFamily::Mode::SingletonPartition) return {VertexId(label)};
  return adhesion_.sets[side - 1][*parse_nat(label) - 1];
}

VertexId AmalgamSpec::partner(int side, const VertexId& x, const EdgeLabel& label) const {
  if (mode() == AdhesionFamily::Mode::SingletonPartition) return VertexId(side == 1 ? label.l : label.k);
  std::pair<std::size_t, std::size_t> key{*parse_nat(label.k), *parse_nat(label.l)};
  const auto& m = side == 1 ? forward_.at(key) : backward_.at(key);
  auto it = m.find(x);
  if (it == m.end()) throw Error(ErrorCode::Internal, "vertex outside the bonded adhesion set");
  return it->second;
}

std::string AmalgamSpec::describe() const {
  std::ostringstream os;
  os << "amalgam(" << factor(1)->kind() << ", " << factor(2)->kind();
  if (mode() == AdhesionFamily::Mode::SingletonPartition)
    os << ", base " << first_index(1) << "~" << first_index(2);
  else
    os << ", p=(" << *p(1) << "," << *p(2) << ")";
  os << ")";
  return os.str();
}

// Tree -----------------------------------------------------------------------

bool valid_address(const AmalgamSpec& spec, const TreeAddress& t) {
  for (std::size_t d = 0; d < t.labels.size(); ++d) {
    int side = d % 2 == 0 ? 1 : 2;
    if (!spec.valid_index(side, t.labels[d])) return false;
    if (d > 0 && t.labels[d] == spec.first_index(side)) return false;
  }
  return true;
}

namespace {

EdgeLabel make_label(int side, const std::string& mine, const std::string& theirs) {
  return side == 1 ? EdgeLabel{mine, theirs} : EdgeLabel{theirs, mine};
}

}  // namespace

std::vector<TreeEdge> tree_neighbors(const AmalgamSpec& spec, const TreeAddress& t) {
  if (!valid_address(spec, t))
    throw Error(ErrorCode::UnknownVertex, "'" + t.token() + "' is not a node of the amalgamation tree");
  int i = t.side(), j = 3 - i;
  std::vector<TreeEdge> out;
  if (!t.is_root())
    out.push_back({t.parent(), make_label(i, spec.first_index(i), t.labels.back())});
  for (const auto& m : spec.indices(i)) {
    if (!t.is_root() && m == spec.first_index(i)) continue;
    out.push_back({t.child(m), make_label(i, m, spec.first_index(j))});
  }
  return out;
}

namespace {

class AmalgamTree final : public Graph {
 public:
  explicit AmalgamTree(SpecHandle spec) : spec_(std::move(spec)) {
    if (!spec_->p(1) || !spec_->p(2))
      throw Error(ErrorCode::FactorNotFinite, "the tree has infinite degree");
    origin_ = VertexId("t");
  }
  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto t = TreeAddress::parse(v.token);
    if (!t || !valid_address(*spec_, *t)) unknown(v);
    std::vector<VertexId> out;
    for (const auto& e : tree_neighbors(*spec_, *t)) out.emplace_back(e.to.token());
    std::sort(out.begin(), out.end());
    return out;
  }
  bool contains(const VertexId& v) const override {
    auto t = TreeAddress::parse(v.token);
    return t && valid_address(*spec_, *t);
  }
  std::string kind() const override {
    return "tree(" + std::to_string(*spec_->p(1)) + "," + std::to_string(*spec_->p(2)) + ")";
  }
  std::optional<std::vector<VertexId>> finite_vertices() const override {
    if (*spec_->p(1) >= 2 && *spec_->p(2) >= 2) return std::nullopt;
    std::vector<VertexId> out;
    std::deque<TreeAddress> queue{TreeAddress{}};
    std::set<TreeAddress> seen{TreeAddress{}};
    while (!queue.empty()) {
      auto t = queue.front();
      queue.pop_front();
      out.emplace_back(t.token());
      for (const auto& e : tree_neighbors(*spec_, t))
        if (seen.insert(e.to).second) queue.push_back(e.to);
    }
    return sorted(out);
  }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    auto a = TreeAddress::parse(u.token), b = TreeAddress::parse(v.token);
    if (!a || !valid_address(*spec_, *a)) unknown(u);
    if (!b || !valid_address(*spec_, *b)) unknown(v);
    return tree_distance(*a, *b);
  }

 private:
  SpecHandle spec_;
};

bool valid_sum_vertex(const AmalgamSpec& spec, const SumVertex& x) {
  return valid_address(spec, x.node) && spec.factor(x.node.side())->contains(x.vertex);
}

class SumGraph final : public Graph {
 public:
  explicit SumGraph(SpecHandle spec) : spec_(std::move(spec)) {
    origin_ = VertexId(SumVertex{TreeAddress{}, spec_->factor(1)->origin()}.token());
  }
  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto x = SumVertex::parse(v.token);
    if (!x || !valid_sum_vertex(*spec_, *x)) unknown(v);
    std::vector<VertexId> out;
    for (const auto& y : spec_->factor(x->node.side())->neighbors(x->vertex))
      out.emplace_back(SumVertex{x->node, y}.token());
    for (const auto& b : bridges(*spec_, *x)) out.emplace_back(b.token());
    return sorted(std::move(out));
  }
  bool contains(const VertexId& v) const override {
    auto x = SumVertex::parse(v.token);
    return x && valid_sum_vertex(*spec_, *x);
  }
  std::string kind() const override { return "sum(" + spec_->describe() + ")"; }

 private:
  SpecHandle spec_;
};

}  // namespace

GraphHandle amalgamation_tree(SpecHandle spec) { return std::make_shared<AmalgamTree>(std::move(spec)); }

std::vector<SumVertex> bridges(const AmalgamSpec& spec, const SumVertex& x) {
  const auto& t = x.node;
  int i = t.side(), j = 3 - i;
  std::vector<SumVertex> out;
  for (const auto& m : spec.indices_of(i, x.vertex)) {
    if (!t.is_root() && m == spec.first_index(i)) {
      auto label = make_label(i, m, t.labels.back());
      out.push_back({t.parent(), spec.partner(i, x.vertex, label)});
    } else {
      auto label = make_label(i, m, spec.first_index(j));
      out.push_back({t.child(m), spec.partner(i, x.vertex, label)});
    }
  }
  return out;
}

GraphHandle sum_graph(SpecHandle spec) { return std::make_shared<SumGraph>(std::move(spec)); }

// Contraction ----------------------------------------------------------------

ContractedGraph::ContractedGraph(SpecHandle spec) : spec_(std::move(spec)) {
  origin_ = psi(SumVertex{TreeAddress{}, spec_->factor(1)->origin()});
}

std::shared_ptr<const IdClass> ContractedGraph::class_of(const SumVertex& x) const {
  auto key = x.token();
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  if (!valid_sum_vertex(*spec_, x)) throw Error(ErrorCode::UnknownVertex, "'" + key + "' is not a sum-graph vertex");

  std::set<SumVertex> seen{x};
  std::deque<SumVertex> queue{x};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (auto& w : bridges(*spec_, v))
      if (seen.insert(w).second) {
        if (seen.size() > spec_->identification_budget())
          throw Error(ErrorCode::IdentificationBudget,
                      "identification class of '" + key + "' exceeds " +
                          std::to_string(spec_->identification_budget()) + " members");
        queue.push_back(std::move(w));
      }
  }
  auto cls = std::make_shared<IdClass>();
  cls->members.assign(seen.begin(), seen.end());
  std::lock_guard lock(mutex_);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  for (const auto& m : cls->members) cache_.emplace(m.token(), cls);
  return cls;
}

std::shared_ptr<const IdClass> ContractedGraph::class_of(const VertexId& contracted) const {
  auto x = SumVertex::parse(contracted.token);
  if (!x || !valid_sum_vertex(*spec_, *x)) unknown(contracted);
  auto cls = class_of(*x);
  if (cls->representative() != *x) unknown(contracted);
  return cls;
}

VertexId ContractedGraph::psi(const SumVertex& x) const {
  return VertexId(class_of(x)->representative().token());
}

VertexId ContractedGraph::psi(const VertexId& sum_vertex) const {
  auto x = SumVertex::parse(sum_vertex.token);
  if (!x) throw Error(ErrorCode::UnknownVertex, "'" + sum_vertex.token + "' is not a sum-graph vertex");
  return psi(*x);
}

std::vector<VertexId> ContractedGraph::neighbors(const VertexId& v) const {
  auto cls = class_of(v);
  std::vector<VertexId> out;
  for (const auto& m : cls->members)
    for (const auto& y : spec_->factor(m.node.side())->neighbors(m.vertex)) {
      auto w = psi(SumVertex{m.node, y});
      if (w != v) out.push_back(std::move(w));
    }
  return sorted(std::move(out));
}

bool ContractedGraph::contains(const VertexId& v) const {
  auto x = SumVertex::parse(v.token);
  if (!x || !valid_sum_vertex(*spec_, *x)) return false;
  return class_of(*x)->representative() == *x;
}

std::string ContractedGraph::kind() const { return spec_->describe(); }

std::shared_ptr<const ContractedGraph> contract(SpecHandle spec) {
  return std::make_shared<ContractedGraph>(std::move(spec));
}

Identification identification(const ContractedGraph& g, const VertexId& x) {
  auto cls = g.class_of(x);
  std::vector<TreeAddress> nodes;
  for (const auto& m : cls->members) nodes.push_back(m.node);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  Identification out;
  out.size = nodes.size();
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      out.length = std::max(out.length, tree_distance(nodes[a], nodes[b]));
  return out;
}

}  // namespace amalgo
