#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "amalgo/graph.hpp"

namespace amalgo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownVertex: return "unknown-vertex";
    case ErrorCode::BudgetExceeded: return "budget-exceeded";
    case ErrorCode::InvalidSpec: return "invalid-spec";
    case ErrorCode::IdentificationBudget: return "identification-budget-exceeded";
    case ErrorCode::FactorNotFinite: return "factor-not-finite";
    case ErrorCode::MissingBase: return "missing-base-vertex";
    case ErrorCode::NotATree: return "not-a-tree";
    case ErrorCode::TooFewEnds: return "too-few-ends";
    case ErrorCode::NotMultiEnded: return "not-multi-ended";
    case ErrorCode::MismatchedEndpoint: return "mismatched-endpoint";
    case ErrorCode::AdhesionCoverage: return "adhesion-sets-do-not-reach-all-components";
    case ErrorCode::NamespaceInconsistency: return "namespace-inconsistency";
    case ErrorCode::NotInfinitelyManyEnds: return "not-infinitely-many-ends";
    case ErrorCode::EndClassUndetermined: return "end-class-undetermined";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::Internal: return "internal-invariant";
  }
  return "unknown";
}

std::optional<std::size_t> BallView::find(const VertexId& v) const {
  auto it = index.find(v);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t BallView::edge_count() const {
  std::size_t twice = 0;
  for (const auto& a : adj) twice += a.size();
  return twice / 2;
}

BallView ball(const Graph& g, const VertexId& center, std::size_t radius,
              std::size_t vertex_budget) {
  if (!g.contains(center))
    throw Error(ErrorCode::UnknownVertex, "ball center '" + center.token + "' not in " + g.kind());

  std::unordered_map<VertexId, std::size_t> dist{{center, 0}};
  std::unordered_map<VertexId, std::vector<VertexId>> nbrs;
  std::vector<VertexId> layer{center};
  for (std::size_t d = 0; d <= radius && !layer.empty(); ++d) {
    std::vector<VertexId> next;
    for (const auto& v : layer) {
      auto ns = g.neighbors(v);
      if (d < radius) {
        for (const auto& w : ns) {
          if (dist.emplace(w, d + 1).second) {
            next.push_back(w);
            if (dist.size() > vertex_budget)
              throw Error(ErrorCode::BudgetExceeded,
                          "ball of radius " + std::to_string(radius) + " in " + g.kind() +
                              " exceeds the vertex budget of " + std::to_string(vertex_budget));
          }
        }
      }
      nbrs.emplace(v, std::move(ns));
    }
    layer = std::move(next);
  }

  BallView view;
  view.center = center;
  view.radius = radius;
  view.vertices.reserve(dist.size());
  for (const auto& [v, _] : dist) view.vertices.push_back(v);
  std::sort(view.vertices.begin(), view.vertices.end(), [&](const VertexId& a, const VertexId& b) {
    auto da = dist.at(a), db = dist.at(b);
    return da != db ? da < db : a < b;
  });
  for (std::size_t i = 0; i < view.vertices.size(); ++i) view.index.emplace(view.vertices[i], i);
  view.dist.resize(view.size());
  view.adj.resize(view.size());
  view.host_degree.resize(view.size());
  for (std::size_t i = 0; i < view.size(); ++i) {
    const auto& v = view.vertices[i];
    view.dist[i] = dist.at(v);
    const auto& ns = nbrs.at(v);
    view.host_degree[i] = ns.size();
    for (const auto& w : ns)
      if (auto j = view.find(w)) view.adj[i].push_back(*j);
    std::sort(view.adj[i].begin(), view.adj[i].end());
  }
  return view;
}

std::vector<std::size_t> window_bfs(const BallView& view, std::size_t source) {
  constexpr auto inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> d(view.size(), inf);
  std::vector<std::size_t> queue;
  queue.reserve(view.size());
  d[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto v = queue[head];
    for (auto w : view.adj[v])
      if (d[w] == inf) {
        d[w] = d[v] + 1;
        queue.push_back(w);
      }
  }
  return d;
}

std::size_t exact_distance(const Graph& g, const VertexId& u, const VertexId& v,
                           std::size_t a, std::size_t vertex_budget) {
  auto window = ball(g, g.origin(), 2 * a, vertex_budget);
  auto iu = window.find(u), iv = window.find(v);
  if (!iu || window.dist[*iu] > a || !iv || window.dist[*iv] > a)
    throw Error(ErrorCode::UnknownVertex,
                "exact_distance: endpoints must lie in the origin ball of radius " + std::to_string(a));
  auto d = window_bfs(window, *iu)[*iv];
  if (d == std::numeric_limits<std::size_t>::max())
    throw Error(ErrorCode::Internal, "geodesic left the containment window");
  return d;
}

std::string to_edgelist(const BallView& view) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < view.size(); ++i)
    for (auto j : view.adj[i])
      if (view.vertices[i] < view.vertices[j])
        lines.push_back(view.vertices[i].token + " " + view.vertices[j].token);
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string to_dot(const BallView& view, const std::string& name) {
  std::ostringstream os;
  os << "graph " << dot_quote(name) << " {\n";
  std::vector<VertexId> sorted_vertices = view.vertices;
  std::sort(sorted_vertices.begin(), sorted_vertices.end());
  for (const auto& v : sorted_vertices)
    os << "  " << dot_quote(v.token) << " [dist=" << view.dist[view.index.at(v)] << "];\n";
  std::istringstream edges(to_edgelist(view));
  std::string a, b;
  while (edges >> a >> b) os << "  " << dot_quote(a) << " -- " << dot_quote(b) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace amalgo
