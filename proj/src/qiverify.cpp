#include "amalgo/qiverify.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <limits>
#include <map>
#include <thread>
#include <unordered_map>

#include "amalgo/tokens.hpp"

namespace amalgo {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

std::int64_t floor_q(const Rational& q) {
  auto n = q.numerator(), d = q.denominator();
  return n >= 0 ? n / d : -((-n + d - 1) / d);
}

// Exact distances among a fixed list of points: closed form pair by pair, or
// breadth-first rows on a window that contains every geodesic.
class Metric {
 public:
  // points[i] must lie in the window when there is one.
  Metric(const Graph& g, std::vector<VertexId> points, std::optional<BallView> window)
      : g_(g), points_(std::move(points)), window_(std::move(window)) {
    if (window_) {
      at_.reserve(points_.size());
      for (const auto& p : points_) {
        auto k = window_->find(p);
        if (!k) throw Error(ErrorCode::Internal, "point outside its distance window");
        at_.push_back(*k);
      }
    } else {
      load_coordinates();
    }
  }

  // Row handle: distances from point i, computed lazily for closed forms.
  class Row {
   public:
    std::size_t operator()(std::size_t j) const {
      if (!bfs_.empty()) return bfs_[m_.at_[j]];
      if (!m_.offset_.empty()) return m_.coordinate_distance(i_, j);
      return *m_.g_.distance(m_.points_[i_], m_.points_[j]);
    }

   private:
    friend class Metric;
    Row(const Metric& m, std::size_t i) : m_(m), i_(i) {
      if (m.window_) {
        bfs_ = window_bfs(*m.window_, m.at_[i]);
        for (auto k : m.at_)
          if (bfs_[k] == kInf) throw Error(ErrorCode::Internal, "geodesic left the containment window");
      }
    }
    const Metric& m_;
    std::size_t i_;
    std::vector<std::size_t> bfs_;
  };

  Row row(std::size_t i) const { return Row(*this, i); }

 private:
  const Graph& g_;
  std::vector<VertexId> points_;
  std::optional<BallView> window_;
  std::vector<std::size_t> at_;
  // flattened coordinates of point i: coords_[offset_[i] .. offset_[i+1])
  Graph::Coordinates::Metric metric_ = Graph::Coordinates::Metric::L1;
  std::vector<std::int64_t> coords_;
  std::vector<std::size_t> offset_;

  void load_coordinates() {
    if (points_.empty() || !g_.coordinates(points_.front())) return;
    metric_ = g_.coordinates(points_.front())->metric;
    offset_.push_back(0);
    for (const auto& p : points_) {
      auto c = g_.coordinates(p);
      if (!c || c->metric != metric_) {
        offset_.clear();
        coords_.clear();
        return;
      }
      coords_.insert(coords_.end(), c->values.begin(), c->values.end());
      offset_.push_back(coords_.size());
    }
  }

  std::size_t coordinate_distance(std::size_t i, std::size_t j) const {
    const std::int64_t* a = coords_.data() + offset_[i];
    const std::int64_t* b = coords_.data() + offset_[j];
    std::size_t la = offset_[i + 1] - offset_[i], lb = offset_[j + 1] - offset_[j];
    if (metric_ == Graph::Coordinates::Metric::L1) {
      std::size_t d = 0;
      for (std::size_t k = 0; k < la; ++k) d += static_cast<std::size_t>(a[k] > b[k] ? a[k] - b[k] : b[k] - a[k]);
      return d;
    }
    std::size_t common = 0;
    while (common < la && common < lb && a[common] == b[common]) ++common;
    return la + lb - 2 * common;
  }
};

// n/d > x, for d > 0.
bool above(std::int64_t n, std::int64_t d, const Rational& x) {
  return n * x.denominator() > x.numerator() * d;
}

bool closed_form(const Graph& g) { return g.distance(g.origin(), g.origin()).has_value(); }

// Largest distance from `center` to any of `targets`.
std::size_t spanning_radius(const Graph& g, const VertexId& center, const std::vector<VertexId>& targets,
                            std::size_t budget) {
  if (closed_form(g)) {
    std::size_t rho = 0;
    for (const auto& t : targets) rho = std::max(rho, *g.distance(center, t));
    return rho;
  }
  std::unordered_map<VertexId, std::size_t> missing;
  for (const auto& t : targets) missing.emplace(t, 0);
  std::unordered_map<VertexId, std::size_t> dist{{center, 0}};
  std::deque<VertexId> queue{center};
  std::size_t rho = 0;
  missing.erase(center);
  while (!missing.empty()) {
    if (queue.empty()) throw Error(ErrorCode::Internal, "image vertex unreachable in " + g.kind());
    auto v = queue.front();
    queue.pop_front();
    for (const auto& w : g.neighbors(v))
      if (dist.emplace(w, dist[v] + 1).second) {
        if (missing.erase(w)) rho = dist[w];
        queue.push_back(w);
        if (dist.size() > budget) throw Error(ErrorCode::BudgetExceeded, "image search exceeds the vertex budget");
      }
  }
  return rho;
}

struct Partial {
  std::size_t pairs = 0;
  Rational upper{0};
  Rational gamma_hat{1};
  Rational c_hat{0};
  std::optional<std::pair<std::size_t, std::size_t>> first;  // least violating pair
  Witness witness;
};

void merge(Partial& into, const Partial& p) {
  into.pairs += p.pairs;
  into.upper = std::max(into.upper, p.upper);
  into.gamma_hat = std::max(into.gamma_hat, p.gamma_hat);
  into.c_hat = std::max(into.c_hat, p.c_hat);
  if (p.first && (!into.first || *p.first < *into.first)) {
    into.first = p.first;
    into.witness = p.witness;
  }
}

unsigned worker_count(unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  return jobs;
}

}  // namespace

const char* to_string(Witness::Kind k) {
  switch (k) {
    case Witness::Kind::Upper: return "upper";
    case Witness::Kind::Lower: return "lower";
    case Witness::Kind::Density: return "density";
  }
  return "?";
}

std::string describe(const Witness& w) {
  if (w.kind == Witness::Kind::Density)
    return "target vertex " + w.u.token + " lies at distance " + std::to_string(w.target_distance) +
           " from the image";
  return std::string(to_string(w.kind)) + " bound fails for (" + w.u.token + ", " + w.v->token +
         "): d_source=" + std::to_string(w.source_distance) + " d_target=" + std::to_string(w.target_distance);
}

DistortionReport measure_distortion(const QiMap& f, std::size_t r, const VerifyOptions& opt) {
  const Graph& src = *f.source();
  const Graph& tgt = *f.target();
  DistortionReport rep;
  rep.radius = r;
  rep.claimed = f.claimed();
  const Rational gamma = rep.claimed.gamma, c = rep.claimed.c, delta = rep.claimed.density_c;

  // source side
  std::optional<BallView> src_window;
  std::vector<VertexId> points;
  if (closed_form(src)) {
    points = ball(src, src.origin(), r, opt.vertex_budget).vertices;
  } else {
    src_window = ball(src, src.origin(), 2 * r, opt.vertex_budget);
    for (std::size_t i = 0; i < src_window->size() && src_window->dist[i] <= r; ++i)
      points.push_back(src_window->vertices[i]);
  }
  const std::size_t n = points.size();

  // images and the target side
  std::vector<VertexId> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    images[i] = f(points[i]);
    if (!tgt.contains(images[i]))
      throw Error(ErrorCode::Internal, f.tag() + " sends '" + points[i].token + "' outside " + tgt.kind());
  }
  auto distinct = sorted(images);
  std::vector<std::size_t> image_at(n);
  for (std::size_t i = 0; i < n; ++i)
    image_at[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), images[i]) -
                                           distinct.begin());
  const VertexId& image_origin = images.front();
  std::optional<BallView> tgt_window;
  if (!closed_form(tgt)) {
    auto rho = spanning_radius(tgt, image_origin, distinct, opt.vertex_budget);
    tgt_window = ball(tgt, image_origin, 2 * rho, opt.vertex_budget);
  }
  Metric source_metric(src, points, std::move(src_window));
  Metric target_metric(tgt, distinct, std::move(tgt_window));

  // pair selection
  const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
  const std::size_t stride = total <= opt.pair_budget ? 1 : (total + opt.pair_budget - 1) / opt.pair_budget;
  rep.sampled = stride > 1;

  const auto p = gamma.numerator(), q = gamma.denominator();
  auto evaluate_row = [&](std::size_t i, Partial& acc) {
    std::size_t base = i * n - i * (i + 1) / 2;  // rank of (i, i+1)
    std::size_t j0 = i + 1;
    if (stride > 1) {
      auto off = base % stride;
      j0 += off == 0 ? 0 : stride - off;
    }
    if (j0 >= n) return;
    auto ds = source_metric.row(i);
    auto dt = target_metric.row(image_at[i]);
    for (std::size_t j = j0; j < n; j += stride) {
      auto dg = static_cast<std::int64_t>(ds(j));
      auto dh = static_cast<std::int64_t>(dt(image_at[j]));
      ++acc.pairs;
      if (dg == 0) continue;
      // fractions are compared by cross multiplication; Rationals are only
      // built when a maximum moves
      if (above(dh, dg, acc.upper)) acc.upper = Rational(dh, dg);
      if (dh > dg && above(dh, dg, acc.gamma_hat)) acc.gamma_hat = Rational(dh, dg);
      if (dh > 0 && dg > dh && above(dg, dh, acc.gamma_hat)) acc.gamma_hat = Rational(dg, dh);
      // slack above gamma*dg and below dg/gamma
      std::int64_t un = q * dh - p * dg, ln = q * dg - p * dh;
      bool upper_wins = un * p >= ln * q;
      auto sn = upper_wins ? un : ln, sd = upper_wins ? q : p;
      if (above(sn, sd, acc.c_hat)) acc.c_hat = Rational(sn, sd);
      if (!acc.first && above(sn, sd, c)) {
        acc.first = std::pair{i, j};
        acc.witness = Witness{upper_wins ? Witness::Kind::Upper : Witness::Kind::Lower, points[i], points[j],
                              static_cast<std::size_t>(dg), static_cast<std::size_t>(dh)};
      }
    }
  };

  Partial result;
  const unsigned workers = std::min<std::size_t>(worker_count(opt.jobs), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) evaluate_row(i, result);
  } else {
    std::vector<Partial> parts(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < n;) evaluate_row(i, parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (const auto& part : parts) merge(result, part);
  }
  rep.pairs = result.pairs;
  rep.upper_ratio = result.upper;
  rep.gamma_hat = result.gamma_hat;
  rep.c_hat = result.c_hat;
  if (result.first) rep.witness = result.witness;

  // density on the interior where a true claim is certain to be seen
  auto interior = floor_q(Rational(static_cast<std::int64_t>(r)) / gamma - c - delta);
  if (interior >= 0) {
    auto R = static_cast<std::size_t>(interior);
    rep.density_radius = R;
    // A window of radius R + k gives exact distances to the image for every
    // interior vertex whose window distance is at most k. phi(origin) is an
    // image within R of every interior vertex, so k = R always suffices; start
    // just above the claimed density and widen only when needed.
    std::size_t k = std::min<std::size_t>(R, static_cast<std::size_t>(std::max<std::int64_t>(0, floor_q(delta))) + 1);
    BallView window;
    std::vector<std::size_t> dist;
    while (true) {
      window = ball(tgt, image_origin, R + k, opt.vertex_budget);
      dist.assign(window.size(), kInf);
      std::deque<std::size_t> queue;
      for (const auto& y : distinct)
        if (auto i = window.find(y)) {
          dist[*i] = 0;
          queue.push_back(*i);
        }
      while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto w : window.adj[v])
          if (dist[w] == kInf) {
            dist[w] = dist[v] + 1;
            queue.push_back(w);
          }
      }
      bool exact = k >= R;
      if (!exact) {
        exact = true;
        for (std::size_t i = 0; i < window.size() && window.dist[i] <= R; ++i) exact = exact && dist[i] <= k;
      }
      if (exact) break;
      k = std::min(R, 2 * k);
    }
    std::optional<Witness> uncovered;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < window.size() && window.dist[i] <= R; ++i) {
      worst = std::max(worst, dist[i]);
      if (!uncovered && Rational(static_cast<std::int64_t>(dist[i])) > delta)
        uncovered = Witness{Witness::Kind::Density, window.vertices[i], std::nullopt, 0, dist[i]};
    }
    rep.density_hat = Rational(static_cast<std::int64_t>(worst));
    if (!rep.witness && uncovered) rep.witness = uncovered;
  }
  rep.pass = !rep.witness.has_value();
  return rep;
}

ClaimResult check_claim(const QiMap& f, const std::vector<std::size_t>& radii, const VerifyOptions& opt) {
  if (radii.empty()) throw Error(ErrorCode::InvalidSpec, "check_claim needs at least one radius");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw Error(ErrorCode::InvalidSpec, "radii must be strictly increasing");
  ClaimResult out;
  for (auto r : radii) {
    out.reports.push_back(measure_distortion(f, r, opt));
    const auto& rep = out.reports.back();
    if (!rep.pass) {
      out.pass = false;
      out.witness = rep.witness;
      out.failed_radius = r;
      break;
    }
  }
  return out;
}

ClaimResult bilipschitz_check(const QiMap& f, const std::vector<std::size_t>& radii, const VerifyOptions& opt) {
  return check_claim(f.with_claim({f.claimed().gamma, 0, 0}), radii, opt);
}

// Symmetries of the built-in generators ---------------------------------------------

namespace {

std::optional<std::int64_t> as_int(const std::string& s) {
  try {
    std::size_t used = 0;
    auto x = std::stoll(s, &used);
    if (used == s.size()) return x;
  } catch (...) {
  }
  return std::nullopt;
}

std::optional<std::pair<std::int64_t, std::int64_t>> as_point(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) return std::nullopt;
  auto x = as_int(s.substr(0, comma)), y = as_int(s.substr(comma + 1));
  if (!x || !y) return std::nullopt;
  return std::pair{*x, *y};
}

// Route from `from` to x in a tree with a closed-form metric, as the ordinal
// of each step among the available (sorted, parent-free) neighbours.
std::vector<std::size_t> ordinals(const Graph& tree, const VertexId& from, const VertexId& x) {
  std::vector<VertexId> route{x};
  while (route.back() != from) {
    auto d = *tree.distance(route.back(), from);
    for (const auto& w : tree.neighbors(route.back()))
      if (*tree.distance(w, from) + 1 == d) {
        route.push_back(w);
        break;
      }
  }
  std::reverse(route.begin(), route.end());
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s + 1 < route.size(); ++s) {
    auto ns = tree.neighbors(route[s]);
    if (s > 0) ns.erase(std::find(ns.begin(), ns.end(), route[s - 1]));
    out.push_back(static_cast<std::size_t>(std::find(ns.begin(), ns.end(), route[s + 1]) - ns.begin()));
  }
  return out;
}

VertexId follow(const Graph& tree, const VertexId& from, const std::vector<std::size_t>& steps) {
  VertexId prev, cur = from;
  for (std::size_t s = 0; s < steps.size(); ++s) {
    auto ns = tree.neighbors(cur);
    if (s > 0) ns.erase(std::find(ns.begin(), ns.end(), prev));
    prev = cur;
    cur = ns.at(steps[s]);
  }
  return cur;
}

}  // namespace

std::optional<UnvaryingWitness> unvarying_probe(GraphHandle g, const VertexId& u, const VertexId& v, std::size_t r) {
  if (!g->contains(u) || !g->contains(v)) return std::nullopt;
  auto window = ball(*g, g->origin(), r);
  if (!window.find(u) || !window.find(v)) return std::nullopt;
  const auto kind = g->kind();
  const auto h = g;

  if (kind == "doubleray") {
    auto shift = *as_int(v.token) - *as_int(u.token);
    QiMap m(g, h, [shift](const VertexId& x) { return VertexId(std::to_string(*as_int(x.token) + shift)); }, {},
            "translation");
    return UnvaryingWitness{1, "translation by " + std::to_string(shift), std::move(m)};
  }
  if (kind == "grid2d") {
    auto a = *as_point(u.token), b = *as_point(v.token);
    auto dx = b.first - a.first, dy = b.second - a.second;
    QiMap m(g, h,
            [dx, dy](const VertexId& x) {
              auto p = *as_point(x.token);
              return VertexId(std::to_string(p.first + dx) + "," + std::to_string(p.second + dy));
            },
            {}, "translation");
    return UnvaryingWitness{1, "translation by (" + std::to_string(dx) + "," + std::to_string(dy) + ")", std::move(m)};
  }
  if (kind.rfind("regtree(", 0) == 0 || kind.rfind("semitree(", 0) == 0) {
    // Equal degrees put u and v in the same class of a (semi)regular tree, and
    // re-rooting at v is then an automorphism.
    if (g->neighbors(u).size() != g->neighbors(v).size()) return std::nullopt;
    QiMap m(g, h, [g, u, v](const VertexId& x) { return follow(*g, v, ordinals(*g, u, x)); }, {}, "reroot");
    return UnvaryingWitness{1, "re-rooting " + u.token + " at " + v.token, std::move(m)};
  }
  return std::nullopt;
}

}  // namespace amalgo
