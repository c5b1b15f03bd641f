#include <algorithm>
#include <charconv>
#include <cstdint>
#include <set>
#include <string_view>

#include "amalgo/graph.hpp"
#include "amalgo/tokens.hpp"

namespace amalgo {

void Graph::unknown(const VertexId& v) const {
  throw Error(ErrorCode::UnknownVertex,
              "vertex '" + v.token + "' is not a vertex of " + kind());
}

namespace {

std::size_t abs_diff(std::int64_t a, std::int64_t b) {
  return static_cast<std::size_t>(a > b ? a - b : b - a);
}

class DoubleRay final : public Graph {
 public:
  DoubleRay() { origin_ = VertexId("0"); }

  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto n = parse_int(v.token);
    if (!n) unknown(v);
    return sorted({VertexId(std::to_string(*n - 1)), VertexId(std::to_string(*n + 1))});
  }
  bool contains(const VertexId& v) const override { return parse_int(v.token).has_value(); }
  std::string kind() const override { return "doubleray"; }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    auto a = parse_int(u.token), b = parse_int(v.token);
    if (!a) unknown(u);
    if (!b) unknown(v);
    return abs_diff(*a, *b);
  }
  std::optional<Coordinates> coordinates(const VertexId& v) const override {
    auto a = parse_int(v.token);
    if (!a) unknown(v);
    return Coordinates{Coordinates::Metric::L1, {*a}};
  }
};

// Integer-labelled finite families share the "0".."n-1" identity scheme.
class IndexedFinite : public Graph {
 public:
  explicit IndexedFinite(std::size_t n) : n_(n) {
    if (n == 0) throw Error(ErrorCode::InvalidSpec, "graph must have at least one vertex");
    origin_ = VertexId("0");
  }
  bool contains(const VertexId& v) const override { return index(v).has_value(); }
  std::optional<std::vector<VertexId>> finite_vertices() const override {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < n_; ++i) out.emplace_back(std::to_string(i));
    return sorted(std::move(out));
  }

 protected:
  std::size_t n_;

  std::optional<std::size_t> index(const VertexId& v) const {
    auto k = parse_nat(v.token);
    if (!k || *k >= n_) return std::nullopt;
    return k;
  }
  std::size_t checked(const VertexId& v) const {
    auto k = index(v);
    if (!k) unknown(v);
    return *k;
  }
};

class Cycle final : public IndexedFinite {
 public:
  explicit Cycle(std::size_t n) : IndexedFinite(n) {
    if (n < 3) throw Error(ErrorCode::InvalidSpec, "cycle(n) needs n >= 3");
  }
  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto k = checked(v);
    return sorted({VertexId(std::to_string((k + 1) % n_)),
                   VertexId(std::to_string((k + n_ - 1) % n_))});
  }
  std::string kind() const override { return "cycle(" + std::to_string(n_) + ")"; }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    auto d = abs_diff(static_cast<std::int64_t>(checked(u)), static_cast<std::int64_t>(checked(v)));
    return std::min(d, n_ - d);
  }
};

class Path final : public IndexedFinite {
 public:
  using IndexedFinite::IndexedFinite;
  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto k = checked(v);
    std::vector<VertexId> out;
    if (k > 0) out.emplace_back(std::to_string(k - 1));
    if (k + 1 < n_) out.emplace_back(std::to_string(k + 1));
    return sorted(std::move(out));
  }
  std::string kind() const override { return "path(" + std::to_string(n_) + ")"; }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    return abs_diff(static_cast<std::int64_t>(checked(u)), static_cast<std::int64_t>(checked(v)));
  }
};

class Complete final : public IndexedFinite {
 public:
  using IndexedFinite::IndexedFinite;
  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto k = checked(v);
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (i != k) out.emplace_back(std::to_string(i));
    return sorted(std::move(out));
  }
  std::string kind() const override { return "complete(" + std::to_string(n_) + ")"; }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    return checked(u) == checked(v) ? 0 : 1;
  }
};

class Grid2d final : public Graph {
 public:
  Grid2d() { origin_ = VertexId("0,0"); }

  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto p = parse(v);
    auto [x, y] = *p;
    return sorted({cell(x - 1, y), cell(x + 1, y), cell(x, y - 1), cell(x, y + 1)});
  }
  bool contains(const VertexId& v) const override { return split(v).has_value(); }
  std::string kind() const override { return "grid2d"; }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    auto a = *parse(u), b = *parse(v);
    return abs_diff(a.first, b.first) + abs_diff(a.second, b.second);
  }
  std::optional<Coordinates> coordinates(const VertexId& v) const override {
    auto a = *parse(v);
    return Coordinates{Coordinates::Metric::L1, {a.first, a.second}};
  }

 private:
  static VertexId cell(std::int64_t x, std::int64_t y) {
    return VertexId(std::to_string(x) + "," + std::to_string(y));
  }
  static std::optional<std::pair<std::int64_t, std::int64_t>> split(const VertexId& v) {
    auto comma = v.token.find(',');
    if (comma == std::string::npos) return std::nullopt;
    auto x = parse_int(std::string_view(v.token).substr(0, comma));
    auto y = parse_int(std::string_view(v.token).substr(comma + 1));
    if (!x || !y) return std::nullopt;
    return std::pair{*x, *y};
  }
  std::optional<std::pair<std::int64_t, std::int64_t>> parse(const VertexId& v) const {
    auto p = split(v);
    if (!p) unknown(v);
    return p;
  }
};

// Rooted tree whose root has `root_degree` children and whose non-root
// vertices at even/odd depth have degree p_even/p_odd. Tokens: "r", "r.0",
// "r.0.1", ... (child indices).
class RootedTree final : public Graph {
 public:
  RootedTree(std::size_t p_even, std::size_t p_odd, std::string label)
      : p_even_(p_even), p_odd_(p_odd), label_(std::move(label)) {
    if (p_even < 2 || p_odd < 2)
      throw Error(ErrorCode::InvalidSpec, label_ + ": degrees must be >= 2");
    origin_ = VertexId("r");
  }

  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto path = parse(v);
    std::vector<VertexId> out;
    if (!path.empty()) {
      auto cut = v.token.rfind('.');
      out.emplace_back(v.token.substr(0, cut));
    }
    for (std::size_t i = 0; i < children(path.size()); ++i)
      out.emplace_back(v.token + "." + std::to_string(i));
    return sorted(std::move(out));
  }
  bool contains(const VertexId& v) const override { return try_parse(v).has_value(); }
  std::string kind() const override { return label_; }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    auto du = depth_of(u), dv = depth_of(v);
    if (!du) unknown(u);
    if (!dv) unknown(v);
    // The deepest common ancestor is the longest common prefix that ends on a
    // segment boundary in both tokens.
    const std::string &a = u.token, &b = v.token;
    std::size_t m = 0, dots = 0;
    while (m < a.size() && m < b.size() && a[m] == b[m]) dots += a[m++] == '.';
    bool boundary = (m == a.size() || a[m] == '.') && (m == b.size() || b[m] == '.');
    std::size_t common = boundary ? dots : dots - 1;
    return *du + *dv - 2 * common;
  }
  std::optional<Coordinates> coordinates(const VertexId& v) const override {
    auto path = parse(v);
    return Coordinates{Coordinates::Metric::TreePath, {path.begin(), path.end()}};
  }

 private:
  std::size_t p_even_, p_odd_;
  std::string label_;

  std::size_t children(std::size_t depth) const {
    if (depth == 0) return p_even_;
    return (depth % 2 == 0 ? p_even_ : p_odd_) - 1;
  }
  std::optional<std::vector<std::size_t>> try_parse(const VertexId& v) const {
    const std::string& t = v.token;
    if (t.empty() || t[0] != 'r') return std::nullopt;
    std::vector<std::size_t> path;
    std::size_t pos = 1;
    while (pos < t.size()) {
      if (t[pos] != '.') return std::nullopt;
      auto next = t.find('.', pos + 1);
      auto seg = std::string_view(t).substr(pos + 1, next == std::string::npos ? std::string::npos : next - pos - 1);
      auto k = parse_nat(seg);
      if (!k || *k >= children(path.size()) || (seg.size() > 1 && seg[0] == '0')) return std::nullopt;
      path.push_back(*k);
      pos = next == std::string::npos ? t.size() : next;
    }
    return path;
  }
  // Depth of a valid token, without building the path.
  std::optional<std::size_t> depth_of(const VertexId& v) const {
    const std::string& t = v.token;
    if (t.empty() || t[0] != 'r') return std::nullopt;
    std::size_t depth = 0, pos = 1;
    while (pos < t.size()) {
      if (t[pos] != '.' || pos + 1 >= t.size()) return std::nullopt;
      std::size_t k = 0, start = ++pos;
      for (; pos < t.size() && t[pos] != '.'; ++pos) {
        if (t[pos] < '0' || t[pos] > '9' || pos - start > 9) return std::nullopt;
        k = k * 10 + static_cast<std::size_t>(t[pos] - '0');
      }
      if (pos - start > 1 && t[start] == '0') return std::nullopt;
      if (k >= children(depth)) return std::nullopt;
      ++depth;
    }
    return depth;
  }
  std::vector<std::size_t> parse(const VertexId& v) const {
    auto p = try_parse(v);
    if (!p) unknown(v);
    return *p;
  }
};

class ExplicitGraph final : public Graph {
 public:
  ExplicitGraph(std::map<VertexId, std::vector<VertexId>> adj, std::string label)
      : adj_(std::move(adj)), label_(std::move(label)) {
    origin_ = adj_.begin()->first;
  }
  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto it = adj_.find(v);
    if (it == adj_.end()) unknown(v);
    return it->second;
  }
  bool contains(const VertexId& v) const override { return adj_.count(v) > 0; }
  std::string kind() const override { return label_; }
  std::optional<std::vector<VertexId>> finite_vertices() const override {
    std::vector<VertexId> out;
    for (const auto& [v, _] : adj_) out.push_back(v);
    return out;
  }

 private:
  std::map<VertexId, std::vector<VertexId>> adj_;
  std::string label_;
};

class Decorated final : public Graph {
 public:
  explicit Decorated(GraphHandle inner) : inner_(std::move(inner)) {
    origin_ = inner_->origin();
    base_ = inner_->base();
  }
  std::vector<VertexId> neighbors(const VertexId& v) const override { return inner_->neighbors(v); }
  bool contains(const VertexId& v) const override { return inner_->contains(v); }
  std::string kind() const override { return inner_->kind(); }
  std::optional<std::vector<VertexId>> finite_vertices() const override {
    return inner_->finite_vertices();
  }
  std::optional<std::size_t> distance(const VertexId& u, const VertexId& v) const override {
    return inner_->distance(u, v);
  }
  std::optional<Coordinates> coordinates(const VertexId& v) const override { return inner_->coordinates(v); }
  const Graph& underlying() const override { return inner_->underlying(); }

  void set_origin(VertexId v) { origin_ = std::move(v); }
  void set_base(VertexId v) { base_ = std::move(v); }

 private:
  GraphHandle inner_;
};

}  // namespace

GraphHandle doubleray() { return std::make_shared<DoubleRay>(); }
GraphHandle cycle(std::size_t n) { return std::make_shared<Cycle>(n); }
GraphHandle path(std::size_t n) { return std::make_shared<Path>(n); }
GraphHandle complete(std::size_t n) { return std::make_shared<Complete>(n); }
GraphHandle grid2d() { return std::make_shared<Grid2d>(); }

GraphHandle regtree(std::size_t degree) {
  return std::make_shared<RootedTree>(degree, degree, "regtree(" + std::to_string(degree) + ")");
}

GraphHandle semitree(std::size_t p1, std::size_t p2) {
  return std::make_shared<RootedTree>(
      p1, p2, "semitree(" + std::to_string(p1) + "," + std::to_string(p2) + ")");
}

GraphHandle explicit_graph(std::vector<VertexId> vertices,
                           const std::vector<std::pair<VertexId, VertexId>>& edges,
                           std::string label) {
  std::map<VertexId, std::set<VertexId>> adj;
  for (auto& v : vertices) adj[v];
  for (const auto& [a, b] : edges) {
    if (a == b) throw Error(ErrorCode::InvalidSpec, "loop at '" + a.token + "'");
    adj[a].insert(b);
    adj[b].insert(a);
  }
  if (adj.empty()) throw Error(ErrorCode::InvalidSpec, "explicit graph has no vertices");
  for (const auto& [v, _] : adj)
    if (!is_plain_token(v.token))
      throw Error(ErrorCode::InvalidSpec, "vertex token '" + v.token + "' contains reserved characters");

  // connectivity
  std::set<VertexId> seen{adj.begin()->first};
  std::vector<VertexId> stack{adj.begin()->first};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (const auto& w : adj[v])
      if (seen.insert(w).second) stack.push_back(w);
  }
  if (seen.size() != adj.size())
    throw Error(ErrorCode::InvalidSpec, label + ": graph is not connected");

  std::map<VertexId, std::vector<VertexId>> lists;
  for (auto& [v, ns] : adj) lists[v] = std::vector<VertexId>(ns.begin(), ns.end());
  return std::make_shared<ExplicitGraph>(std::move(lists), std::move(label));
}

GraphHandle with_base(GraphHandle g, VertexId base) {
  if (!g->contains(base))
    throw Error(ErrorCode::MissingBase, "base vertex '" + base.token + "' not in " + g->kind());
  auto d = std::make_shared<Decorated>(std::move(g));
  d->set_base(std::move(base));
  return d;
}

GraphHandle with_origin(GraphHandle g, VertexId origin) {
  if (!g->contains(origin))
    throw Error(ErrorCode::UnknownVertex, "origin '" + origin.token + "' not in " + g->kind());
  auto d = std::make_shared<Decorated>(std::move(g));
  d->set_origin(std::move(origin));
  return d;
}

}  // namespace amalgo
