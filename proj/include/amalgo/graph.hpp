#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amalgo/error.hpp"
#include "amalgo/vertex.hpp"

namespace amalgo {

inline constexpr std::size_t kDefaultVertexBudget = 1'000'000;

/// A connected, locally finite, simple graph given by a neighbor oracle.
///
/// Implementations must be pure functions of their parameters: the same
/// vertex always yields the same neighbor list, in the same (sorted) order,
/// from any thread. Internal memo caches are allowed as long as they are
/// invisible to callers.
class Graph {
 public:
  virtual ~Graph() = default;

  /// Sorted, duplicate-free neighbor list. Throws UnknownVertex.
  virtual std::vector<VertexId> neighbors(const VertexId& v) const = 0;
  virtual bool contains(const VertexId& v) const = 0;

  /// Short human readable description, e.g. "regtree(3)".
  virtual std::string kind() const = 0;

  /// Vertex set if the graph is finite, in sorted order.
  virtual std::optional<std::vector<VertexId>> finite_vertices() const {
    return std::nullopt;
  }

  /// Closed-form graph distance for generators that have one (trees, lines,
  /// grids). Graphs without a formula return nullopt and callers fall back
  /// to windowed breadth-first search.
  virtual std::optional<std::size_t> distance(const VertexId&,
                                              const VertexId&) const {
    return std::nullopt;
  }

  /// Integer coordinates in which distance() is cheap to evaluate: a lattice
  /// point under the L1 metric, or the child-index path from a tree root.
  /// Offered only by graphs with a closed-form distance.
  struct Coordinates {
    enum class Metric { L1, TreePath };
    Metric metric = Metric::L1;
    std::vector<std::int64_t> values;
  };
  virtual std::optional<Coordinates> coordinates(const VertexId&) const { return std::nullopt; }

  /// The wrapped graph for decorators such as with_base(); `*this` otherwise.
  virtual const Graph& underlying() const { return *this; }

  const VertexId& origin() const noexcept { return origin_; }
  const std::optional<VertexId>& base() const noexcept { return base_; }
  bool is_finite() const { return finite_vertices().has_value(); }

 protected:
  VertexId origin_;
  std::optional<VertexId> base_;

  [[noreturn]] void unknown(const VertexId& v) const;
};

using GraphHandle = std::shared_ptr<const Graph>;

// Built-in generators.
GraphHandle doubleray();
GraphHandle cycle(std::size_t n);
GraphHandle path(std::size_t n);
GraphHandle complete(std::size_t n);
GraphHandle grid2d();
GraphHandle regtree(std::size_t degree);
GraphHandle semitree(std::size_t p1, std::size_t p2);

/// Finite graph from an explicit vertex and edge list. Rejects loops,
/// dangling endpoints and disconnected input.
GraphHandle explicit_graph(std::vector<VertexId> vertices,
                           const std::vector<std::pair<VertexId, VertexId>>& edges,
                           std::string label = "explicit");

/// Same graph, with a base vertex for pointed constructions.
GraphHandle with_base(GraphHandle g, VertexId base);
/// Same graph, exploring from a different origin.
GraphHandle with_origin(GraphHandle g, VertexId origin);

/// Finite window onto a graph: the closed ball of some radius with its
/// induced adjacency. Vertices are ordered by (distance, token).
struct BallView {
  VertexId center;
  std::size_t radius = 0;
  std::vector<VertexId> vertices;
  std::vector<std::size_t> dist;                 // distance from center
  std::vector<std::vector<std::size_t>> adj;     // induced, sorted indices
  std::vector<std::size_t> host_degree;          // degree in the host graph
  std::map<VertexId, std::size_t> index;

  std::size_t size() const noexcept { return vertices.size(); }
  std::optional<std::size_t> find(const VertexId& v) const;
  std::size_t edge_count() const;
};

BallView ball(const Graph& g, const VertexId& center, std::size_t radius,
              std::size_t vertex_budget = kDefaultVertexBudget);

/// Breadth-first distances from `source` using only the ball's induced edges.
/// Unreachable entries are SIZE_MAX.
std::vector<std::size_t> window_bfs(const BallView& view, std::size_t source);

/// True distance between two vertices of the origin ball of radius a.
/// Any geodesic between vertices of B_a(origin) stays inside B_{2a}(origin),
/// so the search runs on that window only.
std::size_t exact_distance(const Graph& g, const VertexId& u, const VertexId& v,
                           std::size_t a,
                           std::size_t vertex_budget = kDefaultVertexBudget);

/// Edge list, one "<token> <token>" line per edge, lines sorted, LF endings.
std::string to_edgelist(const BallView& view);
std::string to_dot(const BallView& view, const std::string& name = "ball");

/// Quote a token for DOT output.
std::string dot_quote(const std::string& s);

}  // namespace amalgo
