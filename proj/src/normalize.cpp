#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "amalgo/qimaps.hpp"
#include "amalgo/tokens.hpp"

namespace amalgo {

namespace {

Rational rat(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

using Sets = std::vector<std::vector<VertexId>>;

Sets adhesion_lists(const AmalgamSpec& spec, int side) {
  Sets out;
  for (const auto& l : spec.indices(side)) out.push_back(spec.adhesion_set(side, l));
  return out;
}

// One representative per set, pairwise distinct where a system of distinct
// representatives allows it (maximum matching); unmatched sets fall back to
// their least element.
std::vector<VertexId> representatives(const Sets& sets) {
  std::vector<std::vector<VertexId>> options;
  for (auto s : sets) options.push_back(sorted(std::move(s)));
  std::map<VertexId, std::size_t> owner;
  std::function<bool(std::size_t, std::set<VertexId>&)> augment = [&](std::size_t k, std::set<VertexId>& seen) {
    for (const auto& x : options[k]) {
      if (!seen.insert(x).second) continue;
      auto it = owner.find(x);
      if (it == owner.end() || augment(it->second, seen)) {
        owner[x] = k;
        return true;
      }
    }
    return false;
  };
  for (std::size_t k = 0; k < options.size(); ++k) {
    std::set<VertexId> seen;
    augment(k, seen);
  }
  std::vector<VertexId> reps(options.size());
  std::vector<bool> done(options.size(), false);
  for (const auto& [x, k] : owner) reps[k] = x, done[k] = true;
  for (std::size_t k = 0; k < options.size(); ++k)
    if (!done[k]) reps[k] = options[k].front();
  return reps;
}

Sets singletons(const std::vector<VertexId>& xs) {
  Sets out;
  for (const auto& x : xs) out.push_back({x});
  return out;
}

// Rewrites tree addresses between two specs with the same p_i, matching index
// labels by position.
struct AddressMap {
  std::array<std::unordered_map<std::string, std::string>, 2> label;

  AddressMap(const AmalgamSpec& from, const AmalgamSpec& to) {
    for (int i = 1; i <= 2; ++i) {
      auto a = from.indices(i), b = to.indices(i);
      if (a.size() != b.size()) throw Error(ErrorCode::Internal, "address map between different trees");
      for (std::size_t k = 0; k < a.size(); ++k) label[i - 1].emplace(a[k], b[k]);
    }
  }

  TreeAddress operator()(const TreeAddress& t) const {
    TreeAddress out;
    for (std::size_t d = 0; d < t.labels.size(); ++d) out.labels.push_back(label[d % 2].at(t.labels[d]));
    return out;
  }
};

// Sum-graph map acting copy-wise: (t, x) -> (t', f_side(x)).
QiMap copywise(GraphHandle from, GraphHandle to, const AmalgamSpec& a, const AmalgamSpec& b,
               std::array<std::function<VertexId(const VertexId&)>, 2> f, QiConstants claim, std::string tag) {
  auto addr = std::make_shared<AddressMap>(a, b);
  auto src = from;
  return QiMap(std::move(from), std::move(to),
               [addr, f, src](const VertexId& v) {
                 auto x = SumVertex::parse(v.token);
                 if (!x || !src->contains(v))
                   throw Error(ErrorCode::UnknownVertex, "'" + v.token + "' is not a sum-graph vertex");
                 return VertexId(SumVertex{(*addr)(x->node), f[x->node.side() - 1](x->vertex)}.token());
               },
               claim, std::move(tag));
}

struct Split {
  GraphHandle graph;
  std::map<VertexId, std::vector<VertexId>> copies;
  bool any = false;
};

// Each vertex x becomes n_x copies forming a clique; copies of adjacent
// vertices are all adjacent.
Split split_factor(const Graph& g, const std::map<VertexId, std::size_t>& count, const std::string& label) {
  Split s;
  auto vs = *g.finite_vertices();
  for (const auto& x : vs) {
    auto it = count.find(x);
    std::size_t n = it == count.end() ? 1 : std::max<std::size_t>(it->second, 1);
    auto& cs = s.copies[x];
    if (n == 1) {
      cs.push_back(x);
    } else {
      s.any = true;
      for (std::size_t j = 1; j <= n; ++j) cs.emplace_back(x.token + "#" + std::to_string(j));
    }
  }
  std::vector<VertexId> vertices;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& x : vs) {
    const auto& cx = s.copies.at(x);
    vertices.insert(vertices.end(), cx.begin(), cx.end());
    for (std::size_t a = 0; a < cx.size(); ++a)
      for (std::size_t b = a + 1; b < cx.size(); ++b) edges.emplace_back(cx[a], cx[b]);
    for (const auto& y : g.neighbors(x))
      if (x < y)
        for (const auto& p : cx)
          for (const auto& q : s.copies.at(y)) edges.emplace_back(p, q);
  }
  if (sorted(vertices).size() != vertices.size())
    throw Error(ErrorCode::Internal, "split copy names collide with existing vertices of " + g.kind());
  s.graph = explicit_graph(std::move(vertices), edges, label);
  return s;
}

struct Retract {
  GraphHandle graph;
  std::map<VertexId, VertexId> nearest;
  std::size_t reach = 0;  // max distance of a vertex to the adhesion vertices
};

// Keep the adhesion vertices; join two of them when their distance in g is at
// most 2 reach + 1.
Retract retract_factor(const Graph& g, const std::vector<VertexId>& keep, const std::string& label) {
  Retract r;
  auto vs = *g.finite_vertices();
  std::map<VertexId, std::map<VertexId, std::size_t>> dist;
  for (const auto& a : keep) {
    auto view = ball(g, a, vs.size());
    for (std::size_t i = 0; i < view.size(); ++i) dist[a][view.vertices[i]] = view.dist[i];
  }
  for (const auto& x : vs) {
    std::optional<std::pair<std::size_t, VertexId>> best;
    for (const auto& a : keep) {
      auto it = dist[a].find(x);
      if (it == dist[a].end()) continue;
      std::pair cand{it->second, a};
      if (!best || cand < *best) best = cand;
    }
    if (!best)
      throw Error(ErrorCode::AdhesionCoverage,
                  "vertex '" + x.token + "' of " + g.kind() + " cannot reach an adhesion vertex");
    r.nearest[x] = best->second;
    r.reach = std::max(r.reach, best->first);
  }
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (const auto& a : keep)
    for (const auto& b : keep)
      if (a < b && dist[a].at(b) <= 2 * r.reach + 1) edges.emplace_back(a, b);
  r.graph = explicit_graph(keep, edges, label);
  return r;
}

std::function<VertexId(const VertexId&)> lookup(std::map<VertexId, VertexId> m) {
  return [m = std::move(m)](const VertexId& v) {
    auto it = m.find(v);
    if (it == m.end()) throw Error(ErrorCode::UnknownVertex, "'" + v.token + "' has no image");
    return it->second;
  };
}

}  // namespace

AdhesionClauses check_clauses(const AmalgamSpec& spec) {
  AdhesionClauses out{true, true, true};
  for (int i = 1; i <= 2; ++i) {
    auto sets = adhesion_lists(spec, i);
    std::set<std::vector<VertexId>> seen;
    std::set<VertexId> covered;
    for (auto& s : sets) {
      if (s.size() != 1) out.single_vertex = false;
      auto key = sorted(s);
      if (!seen.insert(key).second) out.distinct = false;
      covered.insert(key.begin(), key.end());
    }
    auto vs = spec.factor(i)->finite_vertices();
    if (!vs || covered.size() != vs->size()) out.covering = false;
  }
  return out;
}

NormalizedSpec adhesion_normalize(SpecHandle spec, std::size_t probe_radius) {
  for (int i = 1; i <= 2; ++i)
    if (!spec->factor(i)->is_finite())
      throw Error(ErrorCode::FactorNotFinite, "adhesion normalisation needs finite factors");
  const auto budget = spec->identification_budget();
  NormalizedSpec out{nullptr, {}, {}, identity_map(spec->factor(1)), {}};

  // Stage 1: one bridging edge per tree edge, between chosen representatives.
  std::array<std::vector<VertexId>, 2> reps{representatives(adhesion_lists(*spec, 1)),
                                            representatives(adhesion_lists(*spec, 2))};
  AdhesionFamily a1;
  a1.sets = {singletons(reps[0]), singletons(reps[1])};
  auto spec1 = std::make_shared<AmalgamSpec>(AmalgamSpec::make(spec->factor(1), spec->factor(2), a1, budget));
  auto D = rat(adhesion_diameter(*spec));
  auto sum0 = sum_graph(spec), sum1 = sum_graph(spec1);
  auto id = [](const VertexId& v) { return v; };
  out.stages.push_back(copywise(sum0, sum1, *spec, *spec1, {id, id}, {2 * D + 1, 0, 0}, "normalize-1"));

  // Stage 2: split vertices chosen by several sets, one copy per set.
  std::array<Split, 2> split;
  AdhesionFamily a2;
  for (int i = 0; i < 2; ++i) {
    std::map<VertexId, std::size_t> count;
    for (const auto& x : reps[i]) ++count[x];
    split[i] = split_factor(*spec->factor(i + 1), count, "split(" + spec->factor(i + 1)->kind() + ")");
    std::map<VertexId, std::size_t> used;
    for (const auto& x : reps[i]) a2.sets[i].push_back({split[i].copies.at(x).at(used[x]++)});
  }
  auto spec2 = std::make_shared<AmalgamSpec>(AmalgamSpec::make(split[0].graph, split[1].graph, a2, budget));
  auto sum2 = sum_graph(spec2);
  bool any_split = split[0].any || split[1].any;
  std::array<std::function<VertexId(const VertexId&)>, 2> first_copy;
  for (int i = 0; i < 2; ++i) {
    std::map<VertexId, VertexId> m;
    for (const auto& [x, cs] : split[i].copies) m.emplace(x, cs.front());
    first_copy[i] = lookup(std::move(m));
  }
  QiConstants split_claim{any_split ? 3 : 1, 0, any_split ? 1 : 0};
  out.stages.push_back(copywise(sum1, sum2, *spec1, *spec2, first_copy, split_claim, "normalize-2"));

  // Stage 3: keep only adhesion vertices, re-edged within distance 2c+1.
  std::array<Retract, 2> retract;
  AdhesionFamily a3;
  for (int i = 0; i < 2; ++i) {
    std::vector<VertexId> keep;
    for (const auto& s : a2.sets[i]) keep.push_back(s.front());
    retract[i] = retract_factor(*split[i].graph, sorted(keep), "retract(" + spec->factor(i + 1)->kind() + ")");
    a3.sets[i] = a2.sets[i];
  }
  auto spec3 = std::make_shared<AmalgamSpec>(AmalgamSpec::make(retract[0].graph, retract[1].graph, a3, budget));
  auto sum3 = sum_graph(spec3);
  auto reach = rat(std::max(retract[0].reach, retract[1].reach));
  out.stages.push_back(copywise(sum2, sum3, *spec2, *spec3,
                                {lookup(retract[0].nearest), lookup(retract[1].nearest)},
                                {2 * reach + 1, 2 * reach, 0}, "normalize-3"));

  out.spec = spec3;
  out.stage_specs = {spec1, spec2, spec3};

  auto before = contract(spec), after = contract(spec3);
  auto f = representative_map(before, sum0, probe_radius);
  for (const auto& s : out.stages) f = compose(f, s);
  out.forward = compose(f, psi_map(sum3, after, probe_radius));

  for (int i = 0; i < 2; ++i) {
    QiMap to_split(spec->factor(i + 1), split[i].graph, first_copy[i], {1, 0, split[i].any ? 1 : 0}, "split");
    auto r = rat(retract[i].reach);
    QiMap to_retract(split[i].graph, retract[i].graph, lookup(retract[i].nearest), {2 * r + 1, 2 * r, 0}, "retract");
    out.factor_maps.push_back(compose(to_split, to_retract));
  }
  return out;
}

}  // namespace amalgo
