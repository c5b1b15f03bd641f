#include <algorithm>
#include <deque>
#include <map>
#include <random>

#include "amalgo/qiverify.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace amalgo;
using namespace amalgo::testoracle;

namespace {

using Sets = std::vector<std::vector<VertexId>>;

Sets singles(std::initializer_list<const char*> ts) {
  Sets out;
  for (auto t : ts) out.push_back({VertexId(t)});
  return out;
}

SpecHandle make_spec(GraphHandle g1, GraphHandle g2, Sets a1, Sets a2) {
  AdhesionFamily a;
  a.sets[0] = std::move(a1);
  a.sets[1] = std::move(a2);
  return std::make_shared<AmalgamSpec>(AmalgamSpec::make(std::move(g1), std::move(g2), a));
}
SpecHandle line_spec() { return make_spec(complete(2), complete(2), singles({"0", "1"}), singles({"0", "1"})); }
SpecHandle cubic_spec() { return make_spec(cycle(3), complete(2), singles({"0", "1", "2"}), singles({"0", "1"})); }

QiMap scale(GraphHandle line, long k, QiConstants claim) {
  return QiMap(line, line, [k](const VertexId& v) { return VertexId(std::to_string(k * std::stol(v.token))); },
               claim, "scale");
}

std::string q(const Rational& x) { return to_string(x); }

}  // namespace

TEST_CASE("identity on the double ray") {
  auto line = doubleray();
  auto rep = measure_distortion(identity_map(line), 5);
  CHECK(rep.pairs == 55);
  CHECK(q(rep.gamma_hat) == "1");
  CHECK(q(rep.c_hat) == "0");
  CHECK(q(rep.density_hat) == "0");
  CHECK(rep.pass);
  CHECK(check_claim(identity_map(line), {1, 2, 3}).pass);
}

TEST_CASE("doubling the double ray") {
  auto line = doubleray();
  auto bad = check_claim(scale(line, 2, {1, 0, 0}), {3});
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->kind == Witness::Kind::Upper);
  CHECK(bad.witness->u.token == "0");
  CHECK(bad.witness->v->token == "-1");
  CHECK(bad.witness->source_distance == 1);
  CHECK(bad.witness->target_distance == 2);
  auto good = check_claim(scale(line, 2, {2, 0, 1}), {1, 2, 4, 6, 8});
  CHECK(good.pass);
  CHECK(q(good.reports.back().gamma_hat) == "2");
  CHECK(q(good.reports.back().density_hat) == "1");
  auto bl = bilipschitz_check(scale(line, 2, {2, 0, 1}), {4});
  CHECK_FALSE(bl.pass);
  CHECK(bl.witness->kind == Witness::Kind::Density);
  CHECK(bilipschitz_check(scale(line, -1, {}), {2, 5}).pass);
  CHECK(bilipschitz_check(identity_map(line), {3}).pass);
  CHECK_THROWS_AS(check_claim(identity_map(line), {}), Error);
  CHECK_THROWS_AS(check_claim(identity_map(line), {3, 3}), Error);
}

TEST_CASE("constant maps fail the lower bound") {
  auto line = doubleray();
  QiMap crush(line, line, [](const VertexId&) { return VertexId("0"); }, {1, 4, 0}, "crush");
  auto res = check_claim(crush, {1, 2});
  CHECK(res.pass);  // pairs at distance <= 4 fit into c = 4 at radius 2
  auto deeper = check_claim(crush, {1, 2, 3});
  CHECK_FALSE(deeper.pass);
  CHECK(deeper.failed_radius == 3u);
  CHECK(deeper.reports.size() == 3);
  CHECK(deeper.witness->kind == Witness::Kind::Lower);
}

TEST_CASE("windowed reports match all-pairs search on finite graphs") {
  std::mt19937 rng(7);
  std::vector<GraphHandle> graphs{cycle(7), cycle(10), complete(5), path(6)};
  graphs.push_back(explicit_graph({VertexId("a"), VertexId("b"), VertexId("c"), VertexId("d"), VertexId("e")},
                                  {{VertexId("a"), VertexId("b")}, {VertexId("b"), VertexId("c")},
                                   {VertexId("c"), VertexId("d")}, {VertexId("b"), VertexId("e")},
                                   {VertexId("e"), VertexId("d")}},
                                  "house"));
  for (const auto& g : graphs)
    for (const auto& h : graphs) {
      auto hv = *h->finite_vertices();
      std::map<VertexId, VertexId> table;
      auto gv = *g->finite_vertices();
      for (const auto& v : gv) table[v] = hv[rng() % hv.size()];
      for (QiConstants claim : {QiConstants{1, 0, 0}, QiConstants{2, 1, 1}, QiConstants{Rational(3, 2), 2, 0}}) {
        QiMap f(g, h, [table](const VertexId& v) { return table.at(v); }, claim, "table");
        for (std::size_t r : {1, 2, 5}) {
          CAPTURE(g->kind());
          CAPTURE(h->kind());
          CAPTURE(r);
          auto rep = measure_distortion(f, r);
          auto o = oracle(f, r);
          CHECK(rep.pairs == o.pairs);
          CHECK(q(rep.gamma_hat) == q(o.gamma_hat));
          CHECK(q(rep.c_hat) == q(o.c_hat));
          CHECK(q(rep.density_hat) == q(o.density_hat));
        }
      }
    }
}

TEST_CASE("claims of the constructed maps hold") {
  for (auto spec : {line_spec(), cubic_spec()}) {
    CAPTURE(spec->describe());
    auto f = psi_map(spec);
    auto res = check_claim(f, {4, 6, 8});
    CHECK(res.pass);
    for (const auto& rep : res.reports) CHECK((rep.upper_ratio <= 1));  // contraction never stretches
  }
  CHECK(check_claim(tree_collapse_map(cubic_spec()), {4, 6}).pass);
  VerifyOptions sampled;
  sampled.pair_budget = 1'000'000;
  for (auto t : {semitree(4, 4), semitree(3, 4)}) {
    auto f = cubic_tree_map(t);
    CHECK(check_claim(f, {6, 10}, sampled).pass);
  }
  auto exact = measure_distortion(cubic_tree_map(regtree(3)), 8);
  CHECK(q(exact.gamma_hat) == "1");
  CHECK(q(exact.c_hat) == "0");
  auto absorb = absorb_finite_factor(
      make_spec(complete(2), doubleray(), singles({"0", "1"}), singles({"0", "3"})));
  CHECK(check_claim(absorb, {4, 8}).pass);
}

TEST_CASE("distortion grows with the radius") {
  std::vector<QiMap> maps{psi_map(cubic_spec()), scale(doubleray(), 3, {3, 0, 2}), cubic_tree_map(semitree(3, 4)),
                          tree_collapse_map(cubic_spec())};
  for (const auto& f : maps) {
    Rational g{1}, c{0};
    for (std::size_t r = 1; r <= 6; ++r) {
      auto rep = measure_distortion(f, r);
      CHECK((rep.gamma_hat >= g));
      CHECK((rep.c_hat >= c));
      g = rep.gamma_hat;
      c = rep.c_hat;
    }
  }
}

TEST_CASE("parallel and sampled evaluation are deterministic") {
  auto f = psi_map(cubic_spec());
  VerifyOptions one, eight;
  eight.jobs = 8;
  auto a = measure_distortion(f, 7, one), b = measure_distortion(f, 7, eight);
  CHECK(a.pairs == b.pairs);
  CHECK(q(a.gamma_hat) == q(b.gamma_hat));
  CHECK(q(a.c_hat) == q(b.c_hat));
  auto bad = scale(doubleray(), 3, {1, 0, 0});
  auto wa = measure_distortion(bad, 6, one), wb = measure_distortion(bad, 6, eight);
  REQUIRE(wa.witness.has_value());
  REQUIRE(wb.witness.has_value());
  CHECK(describe(*wa.witness) == describe(*wb.witness));

  VerifyOptions tight;
  tight.pair_budget = 100;
  auto s = measure_distortion(f, 7, tight);
  CHECK(s.sampled);
  CHECK(s.pairs <= 100);
  CHECK(s.pairs >= 90);
  auto s8 = measure_distortion(f, 7, [&] { auto o = tight; o.jobs = 8; return o; }());
  CHECK(s8.pairs == s.pairs);
  CHECK(q(s8.c_hat) == q(s.c_hat));
}

TEST_CASE("composed claims pass when the parts pass") {
  auto spec = cubic_spec();
  auto sum = sum_graph(spec);
  auto contracted = contract(spec);
  auto psi = psi_map(sum, contracted);
  auto tf = tree_factorisation_map(contracted);
  REQUIRE(check_claim(psi, {4}).pass);
  REQUIRE(check_claim(tf.map, {4}).pass);
  CHECK(check_claim(compose(psi, tf.map), {4, 6}).pass);

  auto t = semitree(3, 4);
  auto cubic = cubic_tree_map(t);
  auto shift = unvarying_probe(t, VertexId("r"), VertexId("r.0.1"), 4);
  REQUIRE(shift.has_value());
  CHECK(check_claim(compose(shift->map, cubic), {3, 5}).pass);
}

TEST_CASE("tree factorisation lands where expected") {
  auto three = tree_factorisation_map(contract(cubic_spec()));
  CHECK(three.cubic_applied);
  CHECK(check_claim(three.map, {8}).pass);
  auto line = tree_factorisation_map(contract(line_spec()));
  CHECK_FALSE(line.cubic_applied);
  CHECK(check_claim(line.map, {8}).pass);
}

TEST_CASE("unvarying witnesses") {
  auto line = doubleray();
  auto w = unvarying_probe(line, VertexId("0"), VertexId("7"), 8);
  REQUIRE(w.has_value());
  CHECK(q(w->gamma) == "1");
  CHECK(w->map(VertexId("0")).token == "7");
  CHECK(bilipschitz_check(w->map, {5}).pass);
  CHECK_FALSE(unvarying_probe(line, VertexId("0"), VertexId("9"), 8).has_value());

  auto grid = grid2d();
  auto gw = unvarying_probe(grid, VertexId("0,0"), VertexId("1,-2"), 3);
  REQUIRE(gw.has_value());
  CHECK(gw->map(VertexId("0,0")).token == "1,-2");
  CHECK(bilipschitz_check(gw->map, {3}).pass);

  auto tree = regtree(3);
  auto vs = ball(*tree, tree->origin(), 3).vertices;
  std::mt19937 rng(3);
  for (int k = 0; k < 6; ++k) {
    auto u = vs[rng() % vs.size()], v = vs[rng() % vs.size()];
    auto tw = unvarying_probe(tree, u, v, 3);
    REQUIRE(tw.has_value());
    CHECK(tw->map(u) == v);
    CHECK(bilipschitz_check(tw->map, {4}).pass);
  }
  auto semi = semitree(3, 4);
  CHECK_FALSE(unvarying_probe(semi, VertexId("r"), VertexId("r.0"), 2).has_value());
  auto same = unvarying_probe(semi, VertexId("r.1"), VertexId("r.0.2.1"), 3);
  REQUIRE(same.has_value());
  CHECK(bilipschitz_check(same->map, {4}).pass);
  CHECK_FALSE(unvarying_probe(cycle(5), VertexId("0"), VertexId("1"), 2).has_value());
}
