#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "amalgo/qimaps.hpp"
#include "amalgo/tokens.hpp"

namespace amalgo {

namespace {

constexpr std::size_t kWalkLimit = 64;

// Parent pointers towards the origin of a tree, from the closed-form metric
// when there is one, otherwise from a breadth-first layering grown on demand.
class Rooting {
 public:
  explicit Rooting(GraphHandle tree) : tree_(std::move(tree)), closed_(tree_->distance(tree_->origin(), tree_->origin()).has_value()) {
    depth_.emplace(tree_->origin(), 0);
    frontier_.push_back(tree_->origin());
  }

  std::optional<VertexId> parent(const VertexId& x) {
    const auto& o = tree_->origin();
    if (x == o) return std::nullopt;
    if (closed_) {
      auto d = *tree_->distance(o, x);
      for (const auto& w : tree_->neighbors(x))
        if (*tree_->distance(o, w) + 1 == d) return w;
      throw Error(ErrorCode::NotATree, "no parent for '" + x.token + "'");
    }
    while (!parent_.count(x)) {
      if (frontier_.empty()) throw Error(ErrorCode::UnknownVertex, "'" + x.token + "' not reachable in " + tree_->kind());
      std::vector<VertexId> next;
      for (const auto& v : frontier_)
        for (const auto& w : tree_->neighbors(v))
          if (depth_.emplace(w, depth_[v] + 1).second) {
            parent_.emplace(w, v);
            next.push_back(w);
          }
      if (depth_.size() > kDefaultVertexBudget) throw Error(ErrorCode::BudgetExceeded, "tree rooting exceeds the vertex budget");
      frontier_ = std::move(next);
    }
    return parent_.at(x);
  }

 private:
  GraphHandle tree_;
  bool closed_;
  std::unordered_map<VertexId, std::size_t> depth_;
  std::unordered_map<VertexId, VertexId> parent_;
  std::vector<VertexId> frontier_;
};

}  // namespace

struct CubicPathSystem::State {
  struct Entry {
    std::vector<VertexId> path;
    std::vector<VertexId> slots;  // start vertices handed to the children, in order
  };

  explicit State(GraphHandle tree) : rooting(tree), tree(std::move(tree)) {}

  std::mutex mutex;
  Rooting rooting;
  GraphHandle tree;
  std::unordered_map<VertexId, Entry> entries;

  std::vector<VertexId> children(const VertexId& x, const std::optional<VertexId>& up) {
    auto ns = tree->neighbors(x);
    if (up) ns.erase(std::remove(ns.begin(), ns.end(), *up), ns.end());
    return ns;
  }

  Entry build(const VertexId& start, std::size_t degree, bool is_root) {
    if (degree < 3)
      throw Error(ErrorCode::InvalidSpec, "cubic placement needs degree >= 3, found " + std::to_string(degree));
    Entry e;
    e.path.push_back(start);
    for (std::size_t i = 1; i + 2 < degree; ++i) e.path.emplace_back(e.path.back().token + ".0");
    for (std::size_t i = 0; i < e.path.size(); ++i) {
      std::size_t arity = (is_root && i == 0) ? 3 : 2;
      for (std::size_t c = 0; c < arity; ++c) {
        VertexId child(e.path[i].token + "." + std::to_string(c));
        if (i + 1 < e.path.size() && child == e.path[i + 1]) continue;
        e.slots.push_back(std::move(child));
      }
    }
    return e;
  }

  const Entry& entry(const VertexId& x) {
    if (auto it = entries.find(x); it != entries.end()) return it->second;
    std::vector<VertexId> chain{x};
    while (!entries.count(chain.back())) {
      auto p = rooting.parent(chain.back());
      if (!p) break;
      chain.push_back(*p);
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      if (entries.count(*it)) continue;
      auto up = rooting.parent(*it);
      auto degree = tree->neighbors(*it).size();
      if (!up) {
        entries.emplace(*it, build(VertexId("r"), degree, true));
        continue;
      }
      const auto& pe = entries.at(*up);
      auto siblings = children(*up, rooting.parent(*up));
      auto j = static_cast<std::size_t>(std::find(siblings.begin(), siblings.end(), *it) - siblings.begin());
      entries.emplace(*it, build(pe.slots.at(j), degree, false));
    }
    return entries.at(x);
  }
};

CubicPathSystem::CubicPathSystem(GraphHandle tree)
    : tree_(tree), target_(regtree(3)), state_(std::make_unique<State>(std::move(tree))) {}

CubicPathSystem::~CubicPathSystem() = default;

std::vector<VertexId> CubicPathSystem::path(const VertexId& x) const {
  if (!tree_->contains(x)) throw Error(ErrorCode::UnknownVertex, "'" + x.token + "' is not in " + tree_->kind());
  std::lock_guard lock(state_->mutex);
  return state_->entry(x).path;
}

VertexId CubicPathSystem::image(const VertexId& x) const { return path(x).front(); }

// Reduction to branch vertices ------------------------------------------------------

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<VertexId, VertexId>& p) const noexcept {
    return std::hash<VertexId>{}(p.first) * 31 + std::hash<VertexId>{}(p.second);
  }
};

class Branches {
 public:
  Branches(GraphHandle tree, std::size_t depth) : tree_(std::move(tree)), depth_(depth) {}

  const GraphHandle& tree() const { return tree_; }

  // Whether the component of tree - v containing its neighbour w reaches depth_.
  bool infinite_branch(const VertexId& v, const VertexId& w) const {
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find({v, w}); it != memo_.end()) return it->second;
    }
    std::unordered_set<VertexId> seen{v, w};
    std::vector<VertexId> layer{w};
    for (std::size_t d = 0; d < depth_ && !layer.empty(); ++d) {
      std::vector<VertexId> next;
      for (const auto& x : layer)
        for (const auto& y : tree_->neighbors(x))
          if (seen.insert(y).second) next.push_back(y);
      layer = std::move(next);
    }
    bool result = !layer.empty();
    std::lock_guard lock(mutex_);
    memo_.emplace(std::pair{v, w}, result);
    return result;
  }

  std::vector<VertexId> infinite_neighbors(const VertexId& v) const {
    std::vector<VertexId> out;
    for (const auto& w : tree_->neighbors(v))
      if (infinite_branch(v, w)) out.push_back(w);
    return out;
  }

  bool is_branch(const VertexId& v) const { return infinite_neighbors(v).size() >= 3; }

  // Branch vertices adjacent to b after suppression, with the length of the
  // suppressed path.
  std::vector<std::pair<VertexId, std::size_t>> walks(const VertexId& b) const {
    std::vector<std::pair<VertexId, std::size_t>> out;
    for (const auto& w : infinite_neighbors(b)) {
      VertexId prev = b, cur = w;
      for (std::size_t len = 1; len <= kWalkLimit; ++len) {
        auto ns = infinite_neighbors(cur);
        if (ns.size() >= 3) {
          out.emplace_back(cur, len);
          break;
        }
        ns.erase(std::remove(ns.begin(), ns.end(), prev), ns.end());
        if (ns.size() != 1) break;  // dead end of the core
        prev = cur;
        cur = ns.front();
        if (len == kWalkLimit)
          throw Error(ErrorCode::TooFewEnds, "no branch vertex within " + std::to_string(kWalkLimit) + " steps");
      }
    }
    return out;
  }

  // Nearest branch vertex and its distance; ties go to the least token.
  std::pair<VertexId, std::size_t> nearest(const VertexId& x) const {
    std::unordered_set<VertexId> seen{x};
    std::vector<VertexId> layer{x};
    for (std::size_t d = 0; d <= kWalkLimit && !layer.empty(); ++d) {
      std::vector<VertexId> hits;
      for (const auto& v : layer)
        if (is_branch(v)) hits.push_back(v);
      if (!hits.empty()) return {*std::min_element(hits.begin(), hits.end()), d};
      std::vector<VertexId> next;
      for (const auto& v : layer)
        for (const auto& w : tree_->neighbors(v))
          if (seen.insert(w).second) next.push_back(w);
      layer = std::move(next);
    }
    throw Error(ErrorCode::TooFewEnds, "no branch vertex near '" + x.token + "' in " + tree_->kind());
  }

 private:
  GraphHandle tree_;
  std::size_t depth_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::pair<VertexId, VertexId>, bool, PairHash> memo_;
};

class ReducedTree final : public Graph {
 public:
  explicit ReducedTree(std::shared_ptr<const Branches> b) : b_(std::move(b)) {
    origin_ = b_->nearest(b_->tree()->origin()).first;
  }
  std::vector<VertexId> neighbors(const VertexId& v) const override {
    if (!contains(v)) unknown(v);
    std::vector<VertexId> out;
    for (auto& [w, _] : b_->walks(v)) out.push_back(w);
    return sorted(std::move(out));
  }
  bool contains(const VertexId& v) const override { return b_->tree()->contains(v) && b_->is_branch(v); }
  std::string kind() const override { return "reduced(" + b_->tree()->kind() + ")"; }

 private:
  std::shared_ptr<const Branches> b_;
};

}  // namespace

QiMap reduce_tree_map(GraphHandle tree, std::size_t probe_radius, std::size_t prune_depth) {
  auto branches = std::make_shared<const Branches>(tree, prune_depth);
  auto reduced = std::make_shared<ReducedTree>(branches);
  std::size_t span = 1, disp = 0;
  for (const auto& v : ball(*tree, tree->origin(), probe_radius).vertices) {
    auto [b, d] = branches->nearest(v);
    disp = std::max(disp, d);
    if (d == 0)
      for (auto& [_, len] : branches->walks(v)) span = std::max(span, len);
  }
  QiConstants claim{Rational(static_cast<std::int64_t>(span)), Rational(2 * static_cast<std::int64_t>(disp)), 0};
  return QiMap(std::move(tree), std::move(reduced),
               [branches](const VertexId& v) {
                 if (!branches->tree()->contains(v))
                   throw Error(ErrorCode::UnknownVertex, "'" + v.token + "' is not a tree vertex");
                 return branches->nearest(v).first;
               },
               claim, "reduce");
}

QiMap cubic_tree_map(GraphHandle tree, std::size_t probe_radius, std::size_t prune_depth) {
  auto probe = ball(*tree, tree->origin(), probe_radius);
  if (probe.edge_count() + 1 != probe.size())
    throw Error(ErrorCode::NotATree, tree->kind() + " has a cycle within radius " + std::to_string(probe_radius));
  auto ends = end_count_estimate(*tree, 3, 9);
  if (ends.end_class != EndClass::ThreeOrMore)
    throw Error(ErrorCode::TooFewEnds,
                tree->kind() + " has end class " + to_string(ends.end_class) + ", the cubic step needs >= 3");

  std::optional<QiMap> reduce;
  GraphHandle base = tree;
  if (*std::min_element(probe.host_degree.begin(), probe.host_degree.end()) < 3) {
    reduce = reduce_tree_map(tree, probe_radius, prune_depth);
    base = reduce->target();
  }
  std::size_t maxdeg = 3;
  for (auto d : ball(*base, base->origin(), probe_radius).host_degree) maxdeg = std::max(maxdeg, d);
  auto m = Rational(static_cast<std::int64_t>(maxdeg));
  QiConstants claim{m - 2, m - 3, m - 3};
  auto paths = std::make_shared<const CubicPathSystem>(base);
  QiMap place(base, paths->target(), [paths](const VertexId& v) { return paths->image(v); }, claim, "cubic");
  return reduce ? compose(*reduce, place) : place;
}

}  // namespace amalgo
