#include <cstdlib>
#include <algorithm>
#include <limits>

#include "amalgo/graph.hpp"
#include "amalgo/iso.hpp"
#include "doctest.h"

using namespace amalgo;

namespace {

std::vector<std::string> tokens(const std::vector<VertexId>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.token);
  return out;
}

void check_symmetric(const Graph& g, const BallView& b) {
  for (const auto& v : b.vertices)
    for (const auto& w : g.neighbors(v)) {
      auto back = g.neighbors(w);
      CHECK(std::find(back.begin(), back.end(), v) != back.end());
      CHECK(w != v);
    }
}

std::vector<GraphHandle> all_generators() {
  return {doubleray(), cycle(5), path(4), complete(4), grid2d(), regtree(3), semitree(3, 4)};
}

}  // namespace

TEST_CASE("neighbors of the built-in generators") {
  CHECK(tokens(doubleray()->neighbors(VertexId("0"))) == std::vector<std::string>{"-1", "1"});
  CHECK(regtree(3)->neighbors(VertexId("r")).size() == 3);
  CHECK(tokens(cycle(3)->neighbors(VertexId("0"))) == std::vector<std::string>{"1", "2"});
  CHECK(regtree(3)->neighbors(VertexId("r.1")).size() == 3);
  CHECK(semitree(3, 4)->neighbors(VertexId("r.0")).size() == 4);
  CHECK(semitree(3, 4)->neighbors(VertexId("r.0.2")).size() == 3);
}

TEST_CASE("unknown vertices are rejected") {
  for (const char* bad : {"x", "01", "", "1.5"})
    CHECK_THROWS_AS(doubleray()->neighbors(VertexId(bad)), Error);
  CHECK_THROWS_AS(cycle(3)->neighbors(VertexId("3")), Error);
  CHECK_THROWS_AS(regtree(3)->neighbors(VertexId("r.1.2")), Error);  // non-root has 2 children
  CHECK_THROWS_AS(grid2d()->neighbors(VertexId("1")), Error);
  try {
    path(2)->neighbors(VertexId("7"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownVertex);
  }
}

TEST_CASE("ball sizes") {
  CHECK(ball(*regtree(3), VertexId("r"), 2).size() == 10);
  CHECK(ball(*doubleray(), VertexId("0"), 3).size() == 7);
  CHECK(ball(*grid2d(), VertexId("0,0"), 1).size() == 5);
  CHECK(ball(*cycle(5), VertexId("0"), 0).size() == 1);
}

TEST_CASE("ball budget is a hard error") {
  try {
    ball(*regtree(3), VertexId("r"), 10, 100);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("exact distances") {
  CHECK(exact_distance(*doubleray(), VertexId("-2"), VertexId("3"), 3) == 5);
  CHECK(exact_distance(*regtree(3), VertexId("r.0"), VertexId("r.2"), 1) == 2);
  CHECK(exact_distance(*grid2d(), VertexId("0,0"), VertexId("2,1"), 3) == 3);
  CHECK_THROWS_AS(exact_distance(*doubleray(), VertexId("0"), VertexId("9"), 3), Error);
}

TEST_CASE("ball invariants on every generator") {
  for (const auto& g : all_generators()) {
    CAPTURE(g->kind());
    const std::size_t r = 3;
    auto b = ball(*g, g->origin(), r);
    check_symmetric(*g, b);
    // ball = { v : d(origin, v) <= r } with BFS-consistent distances
    auto d0 = window_bfs(b, 0);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(b.dist[i] <= r);
      CHECK(d0[i] == b.dist[i]);
      CHECK(exact_distance(*g, g->origin(), b.vertices[i], r) == b.dist[i]);
    }
    // triangle inequality on a sample of triples
    for (std::size_t i = 0; i < b.size(); i += 3)
      for (std::size_t j = 0; j < b.size(); j += 5)
        for (std::size_t k = 0; k < b.size(); k += 7) {
          auto dij = exact_distance(*g, b.vertices[i], b.vertices[j], r);
          auto djk = exact_distance(*g, b.vertices[j], b.vertices[k], r);
          auto dik = exact_distance(*g, b.vertices[i], b.vertices[k], r);
          CHECK(dik <= dij + djk);
        }
  }
}

TEST_CASE("closed-form distances agree with windowed search") {
  for (const auto& g : all_generators()) {
    CAPTURE(g->kind());
    const std::size_t r = 3;
    auto window = ball(*g, g->origin(), 2 * r);
    auto inner = ball(*g, g->origin(), r);
    for (std::size_t i = 0; i < inner.size(); ++i) {
      auto d = window_bfs(window, *window.find(inner.vertices[i]));
      for (std::size_t j = 0; j < inner.size(); ++j) {
        auto closed = g->distance(inner.vertices[i], inner.vertices[j]);
        REQUIRE(closed.has_value());
        CHECK(*closed == d[*window.find(inner.vertices[j])]);
      }
    }
  }
}

TEST_CASE("token round trip and determinism") {
  for (const auto& g : all_generators()) {
    auto a = ball(*g, g->origin(), 3);
    auto b = ball(*g, g->origin(), 3);
    CHECK(to_edgelist(a) == to_edgelist(b));
    for (const auto& v : a.vertices) CHECK(g->contains(VertexId(v.token)));
  }
}

TEST_CASE("edge list format") {
  auto b = ball(*path(3), VertexId("0"), 5);
  CHECK(to_edgelist(b) == "0 1\n1 2\n");
  auto dot = to_dot(b, "p");
  CHECK(dot.find("\"0\" -- \"1\";") != std::string::npos);
}

TEST_CASE("explicit graphs validate their input") {
  auto g = explicit_graph({VertexId("a"), VertexId("b")}, {{VertexId("a"), VertexId("b")}});
  CHECK(g->is_finite());
  CHECK(tokens(g->neighbors(VertexId("a"))) == std::vector<std::string>{"b"});
  CHECK_THROWS_AS(explicit_graph({VertexId("a"), VertexId("b")}, {}), Error);
  CHECK_THROWS_AS(explicit_graph({}, {{VertexId("a"), VertexId("a")}}), Error);
  CHECK_THROWS_AS(explicit_graph({VertexId("a|b")}, {}), Error);
}

TEST_CASE("base and origin decorators") {
  auto g = with_base(doubleray(), VertexId("4"));
  CHECK(g->base()->token == "4");
  CHECK(g->origin().token == "0");
  CHECK_THROWS_AS(with_base(cycle(3), VertexId("5")), Error);
  auto h = with_origin(grid2d(), VertexId("2,2"));
  CHECK(ball(*h, h->origin(), 1).center.token == "2,2");
}

TEST_CASE("rooted ball isomorphism") {
  auto a = ball(*doubleray(), VertexId("0"), 4);
  auto b = ball(*doubleray(), VertexId("17"), 4);
  CHECK(rooted_isomorphism(a, b).has_value());
  auto c = ball(*path(20), VertexId("2"), 4);  // truncated on one side
  CHECK_FALSE(rooted_isomorphism(a, c).has_value());
  auto t1 = ball(*regtree(3), VertexId("r"), 4);
  auto t2 = ball(*regtree(3), VertexId("r.1.0"), 4);
  auto m = rooted_isomorphism(t1, t2);
  REQUIRE(m.has_value());
  for (std::size_t i = 0; i < t1.size(); ++i)
    for (auto j : t1.adj[i])
      CHECK(std::binary_search(t2.adj[(*m)[i]].begin(), t2.adj[(*m)[i]].end(), (*m)[j]));
  CHECK_FALSE(rooted_isomorphism(t1, ball(*semitree(3, 4), VertexId("r"), 4)).has_value());
}

TEST_CASE("coordinates reproduce closed-form distances") {
  for (auto g : {doubleray(), grid2d(), regtree(3), semitree(3, 4), with_base(regtree(4), VertexId("r.1"))}) {
    auto view = ball(*g, g->origin(), 4);
    for (std::size_t i = 0; i < view.size(); i += 3) {
      auto a = g->coordinates(view.vertices[i]);
      REQUIRE(a.has_value());
      for (std::size_t j = 0; j < view.size(); j += 5) {
        auto b = *g->coordinates(view.vertices[j]);
        std::size_t d = 0;
        if (a->metric == Graph::Coordinates::Metric::L1) {
          for (std::size_t k = 0; k < a->values.size(); ++k) d += std::llabs(a->values[k] - b.values[k]);
        } else {
          std::size_t common = 0;
          while (common < a->values.size() && common < b.values.size() && a->values[common] == b.values[common])
            ++common;
          d = a->values.size() + b.values.size() - 2 * common;
        }
        CHECK(d == *g->distance(view.vertices[i], view.vertices[j]));
      }
    }
  }
  CHECK(!cycle(5)->coordinates(VertexId("0")).has_value());
}
