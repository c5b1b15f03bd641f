#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "amalgo/qimaps.hpp"
#include "amalgo/tokens.hpp"

namespace amalgo {

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

QiMap::QiMap(GraphHandle source, GraphHandle target, Fn fn, QiConstants claimed, std::string tag)
    : source_(std::move(source)),
      target_(std::move(target)),
      fn_(std::move(fn)),
      claimed_(claimed),
      tag_(std::move(tag)) {
  if (claimed_.gamma < 1 || claimed_.c < 0 || claimed_.density_c < 0)
    throw Error(ErrorCode::Internal, "claimed constants out of range for " + tag_);
}

QiMap QiMap::with_claim(QiConstants claimed) const {
  return QiMap(source_, target_, fn_, claimed, tag_);
}

QiMap identity_map(GraphHandle g) {
  auto h = g;
  return QiMap(std::move(g), std::move(h), [](const VertexId& v) { return v; }, {}, "identity");
}

QiConstants compose(const QiConstants& f, const QiConstants& g) {
  return {f.gamma * g.gamma, g.gamma * f.c + g.c, g.gamma * f.density_c + g.c + g.density_c};
}

QiMap compose(const QiMap& f, const QiMap& g) {
  if (f.target().get() != g.source().get())
    throw Error(ErrorCode::MismatchedEndpoint,
                "cannot compose " + f.tag() + " (into " + f.target()->kind() + ") with " + g.tag() +
                    " (from " + g.source()->kind() + ")");
  return QiMap(f.source(), g.target(), [f, g](const VertexId& v) { return g(f(v)); },
               compose(f.claimed(), g.claimed()), g.tag() + " o " + f.tag());
}

std::string export_map(const QiMap& f, std::size_t r, std::size_t vertex_budget) {
  auto b = ball(*f.source(), f.source()->origin(), r, vertex_budget);
  std::vector<VertexId> vs = b.vertices;
  std::sort(vs.begin(), vs.end());
  std::ostringstream os;
  const auto& k = f.claimed();
  os << "# map " << f.tag() << "\n# source " << f.source()->kind() << "\n# target " << f.target()->kind()
     << "\n# radius " << r << "\n# claimed gamma=" << to_string(k.gamma) << " c=" << to_string(k.c)
     << " density_c=" << to_string(k.density_c) << "\n";
  for (const auto& v : vs) os << v.token << " -> " << f(v).token << "\n";
  return os.str();
}

// Measured quantities ----------------------------------------------------------

namespace {

// Distances from `src` until every target is reached. The graph is connected,
// so this terminates; the vertex budget guards runaway searches.
std::unordered_map<VertexId, std::size_t> bfs_until(const Graph& g, const VertexId& src,
                                                    const std::vector<VertexId>& targets,
                                                    std::size_t budget = kDefaultVertexBudget) {
  std::unordered_set<VertexId> missing(targets.begin(), targets.end());
  std::unordered_map<VertexId, std::size_t> dist{{src, 0}};
  std::deque<VertexId> queue{src};
  missing.erase(src);
  while (!missing.empty() && !queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (const auto& w : g.neighbors(v))
      if (dist.emplace(w, dist[v] + 1).second) {
        missing.erase(w);
        queue.push_back(w);
        if (dist.size() > budget) throw Error(ErrorCode::BudgetExceeded, "search exceeds the vertex budget");
      }
  }
  return dist;
}

std::size_t set_diameter(const Graph& g, const std::vector<VertexId>& set) {
  std::size_t d = 0;
  for (const auto& x : set) {
    auto dist = bfs_until(g, x, set);
    for (const auto& y : set) d = std::max(d, dist.at(y));
  }
  return d;
}

Rational rat(std::size_t n) { return Rational(static_cast<std::int64_t>(n)); }

}  // namespace

std::size_t graph_diameter(const Graph& g) {
  auto vs = g.finite_vertices();
  if (!vs) throw Error(ErrorCode::FactorNotFinite, g.kind() + " is not finite");
  return set_diameter(g, *vs);
}

std::size_t adhesion_diameter(const AmalgamSpec& spec) {
  if (spec.mode() == AdhesionFamily::Mode::SingletonPartition) return 0;
  std::size_t d = 0;
  for (int i = 1; i <= 2; ++i)
    for (const auto& set : spec.adhesion().sets[i - 1]) d = std::max(d, set_diameter(*spec.factor(i), set));
  return d;
}

IdentificationStats identification_stats(const ContractedGraph& g, std::size_t radius) {
  IdentificationStats s;
  for (const auto& v : ball(g, g.origin(), radius).vertices) {
    auto id = identification(g, v);
    s.size = std::max(s.size, id.size);
    s.length = std::max(s.length, id.length);
    s.members = std::max(s.members, g.class_of(v)->members.size());
  }
  return s;
}

// Contraction and representatives --------------------------------------------------

QiMap psi_map(GraphHandle sum, std::shared_ptr<const ContractedGraph> contracted, std::size_t probe_radius) {
  auto stats = identification_stats(*contracted, probe_radius);
  auto D = adhesion_diameter(*contracted->spec());
  // Lifting a path of the amalgam crosses each class along bridges, so the
  // class member count bounds the stretch as well.
  auto k = rat(std::max(stats.size * (D + 1), stats.members));
  QiConstants claim{k, k, 0};
  auto g = contracted;
  return QiMap(std::move(sum), std::move(contracted), [g](const VertexId& v) { return g->psi(v); }, claim, "psi");
}

QiMap psi_map(SpecHandle spec, std::size_t probe_radius) {
  return psi_map(sum_graph(spec), contract(spec), probe_radius);
}

QiMap representative_map(std::shared_ptr<const ContractedGraph> contracted, GraphHandle sum,
                         std::size_t probe_radius) {
  auto stats = identification_stats(*contracted, probe_radius);
  auto m = rat(std::max<std::size_t>(stats.members, 1));
  QiConstants claim{m, m - 1, m - 1};
  auto g = contracted;
  return QiMap(std::move(contracted), std::move(sum),
               [g](const VertexId& v) {
                 g->class_of(v);  // validates v
                 return v;
               },
               claim, "representative");
}

QiMap tree_collapse_map(SpecHandle spec) {
  auto delta = rat(std::max(graph_diameter(*spec->factor(1)), graph_diameter(*spec->factor(2))));
  auto sum = sum_graph(spec);
  auto tree = amalgamation_tree(spec);
  QiConstants claim{delta + 2, delta + 2, 0};
  auto s = sum;
  return QiMap(std::move(sum), std::move(tree),
               [s](const VertexId& v) {
                 auto x = SumVertex::parse(v.token);
                 if (!x || !s->contains(v))
                   throw Error(ErrorCode::UnknownVertex, "'" + v.token + "' is not a sum-graph vertex");
                 return VertexId(x->node.token());
               },
               claim, "collapse");
}

// Absorbing a finite factor -------------------------------------------------------

namespace {

class AbsorbTarget final : public Graph {
 public:
  AbsorbTarget(SpecHandle spec, VertexId origin) : spec_(std::move(spec)), g1_(*spec_->factor(1)->finite_vertices()) {
    origin_ = std::move(origin);
  }

  std::vector<VertexId> neighbors(const VertexId& v) const override {
    auto x = parse(v);
    std::vector<VertexId> out;
    for (const auto& y : spec_->factor(2)->neighbors(x.vertex)) out.emplace_back(SumVertex{x.node, y}.token());
    for (const auto& b : bridges(*spec_, x))
      for (const auto& z : g1_)
        for (const auto& t : bridges(*spec_, SumVertex{b.node, z}))
          if (t != x) out.emplace_back(t.token());
    return sorted(std::move(out));
  }

  bool contains(const VertexId& v) const override {
    auto x = SumVertex::parse(v.token);
    return x && x->node.side() == 2 && valid_address(*spec_, x->node) && spec_->factor(2)->contains(x->vertex);
  }

  std::string kind() const override { return "absorbed(" + spec_->describe() + ")"; }

 private:
  SumVertex parse(const VertexId& v) const {
    if (!contains(v)) unknown(v);
    return *SumVertex::parse(v.token);
  }

  SpecHandle spec_;
  std::vector<VertexId> g1_;
};

}  // namespace

QiMap absorb_finite_factor(SpecHandle spec) {
  auto g1 = spec->factor(1)->finite_vertices();
  if (!g1) throw Error(ErrorCode::FactorNotFinite, "absorbing needs a finite first factor");
  if (spec->factor(2)->is_finite())
    throw Error(ErrorCode::InvalidSpec, "absorbing needs an infinite second factor");
  auto sum = sum_graph(spec);
  const auto& s = spec;
  auto vertices = *g1;
  auto fn = [s, vertices, sum](const VertexId& v) {
    auto x = SumVertex::parse(v.token);
    if (!x || !sum->contains(v)) throw Error(ErrorCode::UnknownVertex, "'" + v.token + "' is not a sum-graph vertex");
    if (x->node.side() == 2) return v;
    auto own = bridges(*s, *x);
    if (own.empty())
      for (const auto& z : vertices)
        for (auto& t : bridges(*s, SumVertex{x->node, z})) own.push_back(std::move(t));
    if (own.empty()) throw Error(ErrorCode::InvalidSpec, "a copy of the finite factor has no bridging edge");
    return VertexId(std::min_element(own.begin(), own.end())->token());
  };
  auto target = std::make_shared<AbsorbTarget>(spec, fn(sum->origin()));
  auto diam = rat(graph_diameter(*spec->factor(1)));
  QiConstants claim{diam + 2, 2 * (diam + 1), 0};
  return QiMap(std::move(sum), std::move(target), fn, claim, "absorb");
}

}  // namespace amalgo
