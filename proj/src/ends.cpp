#include <algorithm>
#include <limits>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

#include "amalgo/ends.hpp"

namespace amalgo {

const char* to_string(EndClass c) {
  switch (c) {
    case EndClass::Zero: return "0";
    case EndClass::One: return "1";
    case EndClass::Two: return "2";
    case EndClass::ThreeOrMore: return ">=3";
    case EndClass::Undecided: return "undecided";
  }
  return "undecided";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Component label per window vertex of the annulus r <= d <= R (kNone outside),
// and for each component whether it reaches the outer sphere.
struct Annulus {
  std::vector<std::size_t> label;
  std::vector<bool> deep;
};

Annulus annulus(const BallView& w, std::size_t r) {
  Annulus a;
  a.label.assign(w.size(), kNone);
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w.dist[s] < r || a.label[s] != kNone) continue;
    auto id = a.deep.size();
    bool deep = false;
    std::vector<std::size_t> stack{s};
    a.label[s] = id;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      deep = deep || w.dist[v] == w.radius;
      for (auto u : w.adj[v])
        if (w.dist[u] >= r && a.label[u] == kNone) {
          a.label[u] = id;
          stack.push_back(u);
        }
    }
    a.deep.push_back(deep);
  }
  return a;
}

EndClass classify(std::size_t census) {
  switch (std::min<std::size_t>(census, 3)) {
    case 0: return EndClass::Zero;
    case 1: return EndClass::One;
    case 2: return EndClass::Two;
    default: return EndClass::ThreeOrMore;
  }
}

}  // namespace

std::size_t end_census(const BallView& window, std::size_t r) {
  auto a = annulus(window, r);
  return static_cast<std::size_t>(std::count(a.deep.begin(), a.deep.end(), true));
}

EndEstimate end_count_estimate(const Graph& g, std::size_t r, std::size_t R, std::size_t vertex_budget) {
  if (r == 0 || R < 3 * r)
    throw Error(ErrorCode::InvalidSpec, "end estimate needs r >= 1 and R >= 3r");
  auto w = ball(g, g.origin(), R, vertex_budget);
  EndEstimate e;
  e.r = r;
  e.R = R;
  for (std::size_t i = 0; i < 3; ++i) e.census[i] = end_census(w, r + i);
  if (e.census[0] == 0)
    e.end_class = EndClass::Zero;
  else if (classify(e.census[0]) == classify(e.census[1]) && classify(e.census[1]) == classify(e.census[2]))
    e.end_class = classify(e.census[0]);
  return e;
}

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS,
    boost::property<boost::vertex_color_t, boost::default_color_type,
                    boost::property<boost::vertex_distance_t, long,
                                    boost::property<boost::vertex_predecessor_t, Traits::edge_descriptor>>>,
    boost::property<boost::edge_capacity_t, long,
                    boost::property<boost::edge_residual_capacity_t, long,
                                    boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;

// Minimum number of non-terminal vertices separating `from` and `to`.
long min_vertex_cut(const BallView& w, const std::vector<bool>& from, const std::vector<bool>& to) {
  const long inf = static_cast<long>(w.size()) + 1;
  const std::size_t n = w.size();
  FlowGraph fg(2 * n + 2);
  auto cap = get(boost::edge_capacity, fg);
  auto rev = get(boost::edge_reverse, fg);
  auto add = [&](std::size_t a, std::size_t b, long c) {
    auto e = add_edge(a, b, fg).first;
    auto r = add_edge(b, a, fg).first;
    cap[e] = c;
    cap[r] = 0;
    rev[e] = r;
    rev[r] = e;
  };
  const std::size_t src = 2 * n, sink = 2 * n + 1;
  for (std::size_t v = 0; v < n; ++v) {
    bool terminal = from[v] || to[v];
    add(2 * v, 2 * v + 1, terminal ? inf : 1);  // in -> out
    for (auto u : w.adj[v]) add(2 * v + 1, 2 * u, inf);
    if (from[v]) add(src, 2 * v, inf);
    if (to[v]) add(2 * v + 1, sink, inf);
  }
  return boost::boykov_kolmogorov_max_flow(fg, src, sink);
}

}  // namespace

SeparationEstimate separation_profile(const Graph& g, std::size_t r, std::size_t vertex_budget) {
  SeparationEstimate out;
  out.r = r;
  out.R = 2 * r;
  auto w = ball(g, g.origin(), out.R, vertex_budget);
  auto a = annulus(w, r);
  std::vector<std::size_t> deep_ids;
  for (std::size_t c = 0; c < a.deep.size(); ++c)
    if (a.deep[c]) deep_ids.push_back(c);
  out.components = deep_ids.size();
  if (deep_ids.size() < 2)
    throw Error(ErrorCode::NotMultiEnded,
                "separation profile needs at least two deep components at scale " + std::to_string(r));
  auto attach = [&](std::size_t c) {
    std::vector<bool> s(w.size(), false);
    for (std::size_t v = 0; v < w.size(); ++v) s[v] = a.label[v] == c && w.dist[v] == w.radius;
    return s;
  };
  for (std::size_t i = 0; i < deep_ids.size(); ++i) {
    auto from = attach(deep_ids[i]);
    for (std::size_t j = i + 1; j < deep_ids.size(); ++j)
      out.cut = std::max(out.cut, static_cast<std::size_t>(min_vertex_cut(w, from, attach(deep_ids[j]))));
  }
  return out;
}

}  // namespace amalgo
