#include <algorithm>
#include <set>

#include "amalgo/amalgam.hpp"
#include "amalgo/iso.hpp"
#include "doctest.h"

using namespace amalgo;

namespace {

std::vector<std::vector<VertexId>> singletons(std::initializer_list<const char*> ts) {
  std::vector<std::vector<VertexId>> out;
  for (auto t : ts) out.push_back({VertexId(t)});
  return out;
}

SpecHandle line_spec() {
  AdhesionFamily a;
  a.sets = {singletons({"0", "1"}), singletons({"0", "1"})};
  return std::make_shared<AmalgamSpec>(AmalgamSpec::make(complete(2), complete(2), a));
}

SpecHandle cubic_spec() {
  AdhesionFamily a;
  a.sets = {singletons({"0", "1", "2"}), singletons({"0", "1"})};
  return std::make_shared<AmalgamSpec>(AmalgamSpec::make(cycle(3), complete(2), a));
}

std::vector<TreeAddress> addresses_to_depth(const AmalgamSpec& spec, std::size_t depth) {
  std::vector<TreeAddress> out{TreeAddress{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].depth() == depth) continue;
    for (const auto& e : tree_neighbors(spec, out[i]))
      if (e.to.depth() > out[i].depth()) out.push_back(e.to);
  }
  return out;
}

}  // namespace

TEST_CASE("tree address tokens round trip") {
  TreeAddress t{{"2", "1", "r.0", "a|b"}};
  auto tok = t.token();
  CHECK(tok == "t.2.1.#3:r.0.#3:a|b");
  auto back = TreeAddress::parse(tok);
  REQUIRE(back.has_value());
  CHECK(*back == t);
  CHECK_FALSE(TreeAddress::parse("t.#1:a").has_value());  // simple labels are never escaped
  CHECK_FALSE(TreeAddress::parse("x.1").has_value());
  auto sv = SumVertex::parse("t.3.#1:||t.1|0");
  REQUIRE(sv.has_value());
  CHECK(sv->node.labels == std::vector<std::string>{"3", "|"});
  CHECK(sv->vertex.token == "t.1|0");
  CHECK(TreeAddress{{"10"}} > TreeAddress{{"9"}});
}

TEST_CASE("tree labels exhaust the adhesion indices") {
  auto spec = cubic_spec();
  auto root = tree_neighbors(*spec, TreeAddress{});
  REQUIRE(root.size() == 3);
  std::set<std::string> firsts;
  for (const auto& e : root) firsts.insert(e.label.k);
  CHECK(firsts == std::set<std::string>{"1", "2", "3"});
  for (const auto& t : addresses_to_depth(*spec, 5)) {
    auto es = tree_neighbors(*spec, t);
    std::set<std::string> coords;
    for (const auto& e : es) coords.insert(t.side() == 1 ? e.label.k : e.label.l);
    CHECK(es.size() == (t.side() == 1 ? 3u : 2u));
    CHECK(coords.size() == es.size());
    // the label of an edge is the same seen from both ends
    for (const auto& e : es)
      for (const auto& back : tree_neighbors(*spec, e.to))
        if (back.to == t) CHECK(back.label == e.label);
  }
  auto line = line_spec();
  for (const auto& t : addresses_to_depth(*line, 5)) CHECK(tree_neighbors(*line, t).size() == 2);
  CHECK_THROWS_AS(tree_neighbors(*spec, TreeAddress{{"4"}}), Error);
  CHECK_THROWS_AS(tree_neighbors(*spec, TreeAddress{{"1", "1"}}), Error);  // reserved index
}

TEST_CASE("sum graph degrees") {
  for (auto spec : {line_spec(), cubic_spec()}) {
    auto h = sum_graph(spec);
    auto b = ball(*h, h->origin(), 6);
    for (const auto& v : b.vertices) {
      auto x = *SumVertex::parse(v.token);
      auto fdeg = spec->factor(x.node.side())->neighbors(x.vertex).size();
      CHECK(h->neighbors(v).size() == fdeg + spec->indices_of(x.node.side(), x.vertex).size());
    }
  }
  auto h = sum_graph(cubic_spec());
  CHECK(h->neighbors(VertexId("t|0")).size() == 3);
  CHECK(h->neighbors(VertexId("t.1|0")).size() == 2);
}

TEST_CASE("contraction of the two-copy examples") {
  auto g1 = contract(line_spec());
  auto ray = doubleray();
  for (std::size_t r = 1; r <= 6; ++r) {
    auto b = ball(*g1, g1->origin(), r);
    CHECK(b.size() == 2 * r + 1);
    CHECK(rooted_isomorphism(b, ball(*ray, ray->origin(), r)).has_value());
  }
  for (const auto& v : ball(*g1, g1->origin(), 3).vertices) {
    CHECK(ball(*g1, v, 3).size() == 7);
    auto id = identification(*g1, v);
    CHECK(id.size == 2);
    CHECK(id.length == 1);
  }

  auto g2 = contract(cubic_spec());
  for (const auto& v : ball(*g2, g2->origin(), 5).vertices) {
    CHECK(g2->neighbors(v).size() == 3);
    CHECK(g2->class_of(v)->members.size() == 2);
    auto id = identification(*g2, v);
    CHECK(id.size == 2);
    CHECK(id.length == 1);
  }
}

TEST_CASE("psi is constant on classes and respects edges") {
  auto spec = cubic_spec();
  auto g = contract(spec);
  auto h = sum_graph(spec);
  auto b = ball(*h, h->origin(), 5);
  for (std::size_t i = 0; i < b.size(); ++i) {
    auto pv = g->psi(b.vertices[i]);
    CHECK(g->contains(pv));
    for (auto j : b.adj[i]) {
      auto pw = g->psi(b.vertices[j]);
      if (pv != pw) {
        auto ns = g->neighbors(pv);
        CHECK(std::binary_search(ns.begin(), ns.end(), pw));
      }
    }
  }
  CHECK_FALSE(g->contains(VertexId("t.1|0")));  // not a representative
  CHECK_THROWS_AS(g->neighbors(VertexId("t.1|0")), Error);
}

TEST_CASE("single tree edge contracts to a path") {
  AdhesionFamily a;
  a.sets = {singletons({"0"}), singletons({"0"})};
  auto spec = std::make_shared<AmalgamSpec>(AmalgamSpec::make(complete(2), complete(2), a));
  auto g = contract(spec);
  auto vs = ball(*g, g->origin(), 10);
  CHECK(vs.size() == 3);
  CHECK(vs.edge_count() == 2);
}

TEST_CASE("vertex outside every adhesion set") {
  AdhesionFamily a;
  a.sets = {singletons({"0", "1"}), singletons({"0", "1"})};
  auto g = contract(std::make_shared<AmalgamSpec>(AmalgamSpec::make(cycle(4), complete(2), a)));
  auto id = identification(*g, VertexId("t|2"));
  CHECK(id.size == 1);
  CHECK(id.length == 0);
}

TEST_CASE("spec validation") {
  AdhesionFamily a;
  a.sets[0] = {{VertexId("0"), VertexId("1")}};
  a.sets[1] = singletons({"0"});
  CHECK_THROWS_AS(AmalgamSpec::make(cycle(3), complete(2), a), Error);  // cardinality
  a.sets = {singletons({"5"}), singletons({"0"})};
  CHECK_THROWS_AS(AmalgamSpec::make(cycle(3), complete(2), a), Error);  // not a vertex
  a.sets = {singletons({"0"}), singletons({"0"})};
  a.bonding[{1, 1}] = {{VertexId("1"), VertexId("0")}};
  CHECK_THROWS_AS(AmalgamSpec::make(cycle(3), complete(2), a), Error);  // not a bijection
}

TEST_CASE("overlapping adhesion hits the identification budget") {
  // Both whole-factor adhesion sets with p = 2 identify infinitely many copies.
  std::vector<VertexId> all{VertexId("0"), VertexId("1")};
  AdhesionFamily a;
  a.sets[0] = {all, all};
  a.sets[1] = {all, all};
  auto spec = std::make_shared<AmalgamSpec>(AmalgamSpec::make(complete(2), complete(2), a, 500));
  try {
    auto g = contract(spec);
    g->neighbors(g->origin());
    FAIL("expected identification budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IdentificationBudget);
  }
}

TEST_CASE("triviality") {
  AdhesionFamily a;
  a.sets[0] = {{VertexId("0"), VertexId("1")}};
  a.sets[1] = {{VertexId("0"), VertexId("1")}, {VertexId("1"), VertexId("2")}};
  auto triv = std::make_shared<AmalgamSpec>(AmalgamSpec::make(complete(2), path(3), a));
  CHECK(is_trivial(triv).verdict == Triviality::Verdict::Trivial);
  CHECK(is_trivial(line_spec(), 3).verdict == Triviality::Verdict::Nontrivial);
  CHECK(is_trivial(cubic_spec(), 3).verdict == Triviality::Verdict::Nontrivial);
}

TEST_CASE("finite extension of the triangle example") {
  auto spec = cubic_spec();
  auto fe = finite_extension(spec);
  auto vs = fe.extension->finite_vertices();
  REQUIRE(vs.has_value());
  CHECK(vs->size() == 6);
  CHECK(fe.rewritten->p(1) == 4u);
  CHECK(fe.rewritten->p(2) == 2u);

  auto orig = contract(spec);
  auto rew = contract(fe.rewritten);
  auto y0 = spec->factor(2)->origin();
  auto a = ball(*orig, orig->psi(SumVertex{fe.center, y0}), 4);
  auto b = ball(*rew, rew->psi(SumVertex{TreeAddress{}, VertexId("c|" + y0.token)}), 4);
  CHECK(rooted_isomorphism(a, b).has_value());

  AdhesionFamily inf;
  inf.sets = {singletons({"0"}), singletons({"0"})};
  CHECK_THROWS_AS(finite_extension(std::make_shared<AmalgamSpec>(AmalgamSpec::make(doubleray(), complete(2), inf))),
                  Error);
}

TEST_CASE("base-point amalgam") {
  auto g = with_base(doubleray(), VertexId("0"));
  auto spec = base_point_amalgam(g, g);
  auto h = sum_graph(spec);
  auto b = ball(*h, h->origin(), 6);
  std::size_t base_edges = 0;
  for (const auto& v : b.vertices) {
    auto x = *SumVertex::parse(v.token);
    auto br = bridges(*spec, x);
    CHECK(br.size() == 1);
    if (x.node.is_root() && x.vertex.token == "0") {
      REQUIRE(br.size() == 1);
      CHECK(br[0].node == TreeAddress{{"0"}});
      CHECK(br[0].vertex.token == "0");
      ++base_edges;
    }
  }
  CHECK(base_edges == 1);
  auto c = contract(spec);
  CHECK(c->neighbors(c->origin()).size() == 4);
  CHECK_THROWS_AS(base_point_amalgam(doubleray(), g), Error);
}

TEST_CASE("wedge joins the bases") {
  auto w = wedge({with_base(path(3), VertexId("1")), with_base(cycle(4), VertexId("0")),
                  with_base(complete(3), VertexId("2"))});
  CHECK(w->origin().token == "1:1");
  CHECK(w->neighbors(VertexId("1:1")).size() == 4);
  CHECK(w->neighbors(VertexId("2:0")).size() == 3);
  CHECK(w->finite_vertices()->size() == 10);
  CHECK_THROWS_AS(wedge({path(3)}), Error);
}
