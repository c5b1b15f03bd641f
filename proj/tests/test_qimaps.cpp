#include <algorithm>
#include <map>
#include <set>

#include "amalgo/iso.hpp"
#include "amalgo/qimaps.hpp"
#include "doctest.h"

using namespace amalgo;

namespace {

using Sets = std::vector<std::vector<VertexId>>;

Sets sets_of(std::initializer_list<std::initializer_list<const char*>> ss) {
  Sets out;
  for (auto s : ss) {
    out.emplace_back();
    for (auto t : s) out.back().emplace_back(t);
  }
  return out;
}

SpecHandle make_spec(GraphHandle g1, GraphHandle g2, Sets a1, Sets a2) {
  AdhesionFamily a;
  a.sets[0] = std::move(a1);
  a.sets[1] = std::move(a2);
  return std::make_shared<AmalgamSpec>(AmalgamSpec::make(std::move(g1), std::move(g2), a));
}

SpecHandle line_spec() { return make_spec(complete(2), complete(2), sets_of({{"0"}, {"1"}}), sets_of({{"0"}, {"1"}})); }
SpecHandle cubic_spec() {
  return make_spec(cycle(3), complete(2), sets_of({{"0"}, {"1"}, {"2"}}), sets_of({{"0"}, {"1"}}));
}

std::set<VertexId> as_set(const std::vector<VertexId>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("constant arithmetic of composition") {
  QiConstants f{2, 1, 0}, g{3, 2, 0};
  auto h = compose(f, g);
  CHECK(to_string(h.gamma) == "6");
  CHECK(to_string(h.c) == "5");
  CHECK(to_string(h.density_c) == "2");
  auto with_density = compose(QiConstants{2, 1, 1}, QiConstants{3, 2, 1});
  CHECK(to_string(with_density.density_c) == "6");
  auto id = compose(QiConstants{}, f);
  CHECK(to_string(id.gamma) == "2");
  CHECK(to_string(id.c) == "1");
  CHECK(to_string(Rational(3, 2)) == "3/2");
  CHECK(to_string(Rational(4)) == "4");
}

TEST_CASE("map composition checks endpoints") {
  auto line = doubleray();
  QiMap twice(line, line, [](const VertexId& v) { return VertexId(std::to_string(2 * std::stol(v.token))); },
              {2, 0, 1}, "double");
  auto ff = compose(twice, twice);
  CHECK(ff(VertexId("3")).token == "12");
  CHECK(to_string(ff.claimed().gamma) == "4");
  CHECK(ff.tag() == "double o double");
  auto idf = compose(identity_map(line), twice);
  CHECK(to_string(idf.claimed().gamma) == "2");
  CHECK(to_string(idf.claimed().c) == "0");
  CHECK_THROWS_AS(compose(twice, identity_map(doubleray())), Error);
  CHECK_THROWS_AS(QiMap(line, line, twice, {Rational(1, 2), 0, 0}, "bad"), Error);
}

TEST_CASE("export lists the ball in token order") {
  auto line = doubleray();
  auto text = export_map(identity_map(line), 1);
  CHECK(text ==
        "# map identity\n# source doubleray\n# target doubleray\n# radius 1\n"
        "# claimed gamma=1 c=0 density_c=0\n-1 -> -1\n0 -> 0\n1 -> 1\n");
}

TEST_CASE("psi claims from identification size") {
  auto f = psi_map(line_spec());
  CHECK(to_string(f.claimed().gamma) == "2");
  CHECK(to_string(f.claimed().c) == "2");
  CHECK(to_string(f.claimed().density_c) == "0");
  auto g = psi_map(cubic_spec());
  CHECK(to_string(g.claimed().gamma) == "2");
  // surjective onto the contracted graph
  auto sum = f.source();
  std::set<VertexId> image;
  for (const auto& v : ball(*sum, sum->origin(), 10).vertices) image.insert(f(v));
  for (const auto& w : ball(*f.target(), f.target()->origin(), 3).vertices) CHECK(image.count(w));
}

TEST_CASE("collapse sends each copy onto its tree node") {
  auto spec = cubic_spec();
  auto f = tree_collapse_map(spec);
  CHECK(to_string(f.claimed().gamma) == "3");
  CHECK(to_string(f.claimed().c) == "3");
  auto sum = f.source();
  for (const auto& v : ball(*sum, sum->origin(), 6).vertices) {
    auto x = SumVertex::parse(v.token);
    REQUIRE(x.has_value());
    CHECK(f(v).token == x->node.token());
    CHECK(f.target()->contains(f(v)));
  }
  auto tree = f.target();
  for (const auto& t : ball(*tree, tree->origin(), 4).vertices) {
    auto deg = tree->neighbors(t).size();
    CHECK(deg == (TreeAddress::parse(t.token)->side() == 1 ? 3u : 2u));
  }
  CHECK_THROWS_AS(tree_collapse_map(make_spec(complete(2), doubleray(), sets_of({{"0"}, {"1"}}), sets_of({{"0"}}))),
                  Error);
}

TEST_CASE("cubic path system conditions") {
  for (auto tree : {regtree(3), regtree(4), semitree(4, 4), semitree(3, 4), semitree(3, 5)}) {
    CAPTURE(tree->kind());
    CubicPathSystem paths(tree);
    auto target = paths.target();
    auto view = ball(*tree, tree->origin(), 5);
    std::map<VertexId, VertexId> owner;
    for (const auto& x : view.vertices) {
      auto p = paths.path(x);
      CHECK(p.size() + 2 == tree->neighbors(x).size());
      for (std::size_t i = 0; i + 1 < p.size(); ++i) CHECK(*target->distance(p[i], p[i + 1]) == 1);
      for (const auto& y : p) {
        CHECK(target->contains(y));
        CHECK(owner.emplace(y, x).second);  // paths are disjoint
      }
    }
    for (const auto& x : view.vertices)
      for (const auto& y : tree->neighbors(x)) {
        if (!owner.count(paths.image(y))) continue;
        bool joined = false;
        for (const auto& a : paths.path(x))
          for (const auto& b : paths.path(y)) joined = joined || *target->distance(a, b) == 1;
        CHECK(joined);
      }
  }
}

TEST_CASE("cubic map on the 3-regular tree is an isomorphism") {
  auto f = cubic_tree_map(regtree(3));
  CHECK(to_string(f.claimed().gamma) == "1");
  CHECK(to_string(f.claimed().c) == "0");
  auto src = f.source();
  auto view = ball(*src, src->origin(), 6);
  std::set<VertexId> image;
  for (std::size_t i = 0; i < view.size(); ++i) {
    image.insert(f(view.vertices[i]));
    for (std::size_t j = 0; j < view.size(); j += 7)
      CHECK(*src->distance(view.vertices[i], view.vertices[j]) ==
            *f.target()->distance(f(view.vertices[i]), f(view.vertices[j])));
  }
  CHECK(image.size() == view.size());
  auto g = cubic_tree_map(semitree(3, 4));
  CHECK(to_string(g.claimed().gamma) == "2");
  CHECK(to_string(g.claimed().c) == "1");
}

TEST_CASE("cubic map preconditions") {
  CHECK_THROWS_AS(cubic_tree_map(grid2d()), Error);
  try {
    cubic_tree_map(doubleray());
    FAIL("expected too few ends");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewEnds);
  }
  try {
    cubic_tree_map(grid2d());
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotATree);
  }
}

TEST_CASE("reduction suppresses degree-2 vertices") {
  // wedge of three rays plus a pendant path: one branch vertex
  auto spec = cubic_spec();
  auto tree = amalgamation_tree(spec);  // (3,2)-semiregular
  auto f = reduce_tree_map(tree);
  auto reduced = f.target();
  for (const auto& v : ball(*reduced, reduced->origin(), 4).vertices) {
    CHECK(reduced->neighbors(v).size() == 3);
    CHECK(TreeAddress::parse(v.token)->side() == 1);
  }
  for (const auto& v : ball(*tree, tree->origin(), 6).vertices) {
    auto w = f(v);
    CHECK(tree_distance(*TreeAddress::parse(v.token), *TreeAddress::parse(w.token)) <= 1);
  }
  CHECK(to_string(f.claimed().gamma) == "2");
  auto g = cubic_tree_map(tree);
  CHECK(g.target()->kind() == "regtree(3)");
}

TEST_CASE("absorbing a finite factor") {
  auto spec = make_spec(complete(2), doubleray(), sets_of({{"0"}, {"1"}}), sets_of({{"0"}, {"3"}}));
  auto f = absorb_finite_factor(spec);
  auto sum = f.source();
  auto view = ball(*sum, sum->origin(), 8);
  for (std::size_t i = 0; i < view.size(); ++i) {
    const auto& v = view.vertices[i];
    auto x = SumVertex::parse(v.token);
    auto w = f(v);
    CHECK(f.target()->contains(w));
    if (x->node.side() == 2) {
      CHECK(w == v);
    } else {
      auto d = ball(*sum, v, 2);
      CHECK(std::find(d.vertices.begin(), d.vertices.end(), w) != d.vertices.end());
    }
  }
  CHECK_THROWS_AS(absorb_finite_factor(make_spec(doubleray(), complete(2), sets_of({{"0"}}), sets_of({{"0"}, {"1"}}))),
                  Error);
}

TEST_CASE("normalisation establishes the adhesion clauses") {
  std::vector<SpecHandle> suite{
      line_spec(),
      cubic_spec(),
      make_spec(path(3), complete(2), sets_of({{"0", "2"}}), sets_of({{"0", "1"}})),
      make_spec(path(3), cycle(4), sets_of({{"0", "1"}, {"1", "2"}}), sets_of({{"0", "1"}, {"2", "3"}})),
      make_spec(cycle(4), complete(3), sets_of({{"0"}, {"0"}, {"1"}}), sets_of({{"0"}, {"2"}})),
      make_spec(path(4), path(3), sets_of({{"1"}, {"2"}}), sets_of({{"0"}, {"2"}})),
      make_spec(cycle(4), complete(2), sets_of({{"0", "1"}, {"1", "2"}, {"2", "3"}}), sets_of({{"0", "1"}})),
  };
  for (const auto& spec : suite) {
    CAPTURE(spec->describe());
    auto n = adhesion_normalize(spec);
    auto clauses = check_clauses(*n.spec);
    CHECK(clauses.single_vertex);
    CHECK(clauses.distinct);
    CHECK(clauses.covering);
    CHECK(n.stages.size() == 3);
    CHECK(n.forward.source()->kind() == contract(spec)->kind());
    auto src = n.forward.source();
    for (const auto& v : ball(*src, src->origin(), 4).vertices) CHECK(n.forward.target()->contains(n.forward(v)));
    for (int i = 0; i < 2; ++i) {
      auto vs = *spec->factor(i + 1)->finite_vertices();
      for (const auto& x : vs)
        CHECK(n.factor_maps[i].target()->contains(n.factor_maps[i](x)));
    }
  }
  CHECK_FALSE(check_clauses(*suite[2]).single_vertex);
  CHECK_FALSE(check_clauses(*suite[4]).distinct);
  CHECK(check_clauses(*cubic_spec()).all());
}

TEST_CASE("normalisation splits shared vertices") {
  auto spec = make_spec(cycle(4), complete(2), sets_of({{"0"}, {"0"}, {"2"}}), sets_of({{"0"}, {"1"}}));
  auto n = adhesion_normalize(spec);
  auto g1 = n.stage_specs[1]->factor(1);
  CHECK(as_set(*g1->finite_vertices()) ==
        std::set<VertexId>{VertexId("0#1"), VertexId("0#2"), VertexId("1"), VertexId("2"), VertexId("3")});
  CHECK(g1->neighbors(VertexId("0#1")) ==
        std::vector<VertexId>{VertexId("0#2"), VertexId("1"), VertexId("3")});
  CHECK(to_string(n.stages[1].claimed().gamma) == "3");
  auto same = adhesion_normalize(cubic_spec());
  auto h1 = same.spec->factor(1);
  CHECK(rooted_isomorphism(ball(*h1, h1->origin(), 3), ball(*cycle(3), VertexId("0"), 3)).has_value());
  CHECK_THROWS_AS(adhesion_normalize(make_spec(complete(2), doubleray(), sets_of({{"0"}}), sets_of({{"0"}}))), Error);
}

TEST_CASE("tree factorisation of the basic amalgams") {
  auto line = tree_factorisation_map(contract(line_spec()));
  REQUIRE(line.probe.has_value());
  CHECK(line.probe->end_class == EndClass::Two);
  CHECK_FALSE(line.cubic_applied);
  for (const auto& v : ball(*line.tree, line.tree->origin(), 5).vertices) CHECK(line.tree->neighbors(v).size() == 2);

  auto three = tree_factorisation_map(contract(cubic_spec()));
  CHECK(three.probe->end_class == EndClass::ThreeOrMore);
  CHECK(three.cubic_applied);
  CHECK(three.map.target()->kind() == "regtree(3)");
  auto src = three.map.source();
  for (const auto& v : ball(*src, src->origin(), 4).vertices) CHECK(three.map.target()->contains(three.map(v)));

  auto leaf = tree_factorisation_map(cycle(5));
  CHECK(leaf.tree->finite_vertices()->size() == 1);
  CHECK_FALSE(leaf.probe.has_value());
}
