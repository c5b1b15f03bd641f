#include "amalgo/iso.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace amalgo {

namespace {

// Joint colour refinement so that colours are comparable across both balls.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> refine(const BallView& a,
                                                                     const BallView& b) {
  using Sig = std::vector<std::size_t>;
  auto initial = [](const BallView& v, std::size_t i) {
    return Sig{v.dist[i], v.host_degree[i], v.adj[i].size()};
  };
  std::map<Sig, std::size_t> ids;
  std::vector<std::size_t> ca(a.size()), cb(b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ca[i] = ids.try_emplace(initial(a, i), ids.size()).first->second;
  for (std::size_t i = 0; i < b.size(); ++i) cb[i] = ids.try_emplace(initial(b, i), ids.size()).first->second;

  std::size_t classes = ids.size();
  for (;;) {
    std::map<Sig, std::size_t> next;
    auto sig = [](const BallView& v, const std::vector<std::size_t>& c, std::size_t i) {
      Sig s{c[i]};
      std::vector<std::size_t> around;
      for (auto j : v.adj[i]) around.push_back(c[j]);
      std::sort(around.begin(), around.end());
      s.insert(s.end(), around.begin(), around.end());
      return s;
    };
    std::vector<std::size_t> na(a.size()), nb(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) na[i] = next.try_emplace(sig(a, ca, i), next.size()).first->second;
    for (std::size_t i = 0; i < b.size(); ++i) nb[i] = next.try_emplace(sig(b, cb, i), next.size()).first->second;
    ca.swap(na);
    cb.swap(nb);
    if (next.size() == classes) break;
    classes = next.size();
  }
  return {ca, cb};
}

}  // namespace

std::optional<std::vector<std::size_t>> rooted_isomorphism(const BallView& a, const BallView& b) {
  if (a.size() != b.size() || a.edge_count() != b.edge_count()) return std::nullopt;
  if (a.size() == 0) return std::vector<std::size_t>{};
  auto [ca, cb] = refine(a, b);
  {
    auto ha = ca, hb = cb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return std::nullopt;
  }

  constexpr auto none = static_cast<std::size_t>(-1);
  const std::size_t n = a.size();
  std::vector<std::size_t> map(n, none), inverse(n, none);

  auto consistent = [&](std::size_t i, std::size_t j) {
    if (ca[i] != cb[j] || inverse[j] != none) return false;
    for (auto k : a.adj[i])
      if (map[k] != none && !std::binary_search(b.adj[j].begin(), b.adj[j].end(), map[k])) return false;
    for (auto l : b.adj[j])
      if (inverse[l] != none && !std::binary_search(a.adj[i].begin(), a.adj[i].end(), inverse[l]))
        return false;
    return true;
  };

  // Ball order is by distance, so every non-center vertex has an earlier
  // neighbour; its image restricts the candidates.
  std::vector<std::vector<std::size_t>> candidates(n);
  std::vector<std::size_t> cursor(n, 0);
  auto candidates_for = [&](std::size_t i) {
    std::vector<std::size_t> out;
    if (i == 0) {
      out.push_back(0);
      return out;
    }
    std::size_t anchor = none;
    for (auto k : a.adj[i])
      if (k < i) {
        anchor = k;
        break;
      }
    if (anchor == none) {
      for (std::size_t j = 0; j < n; ++j) out.push_back(j);
    } else {
      out = b.adj[map[anchor]];
    }
    return out;
  };

  std::size_t i = 0;
  candidates[0] = candidates_for(0);
  while (true) {
    if (i == n) return map;
    bool placed = false;
    while (cursor[i] < candidates[i].size()) {
      auto j = candidates[i][cursor[i]++];
      if (consistent(i, j)) {
        map[i] = j;
        inverse[j] = i;
        placed = true;
        break;
      }
    }
    if (placed) {
      ++i;
      if (i < n) {
        candidates[i] = candidates_for(i);
        cursor[i] = 0;
      }
      continue;
    }
    if (i == 0) return std::nullopt;
    --i;
    inverse[map[i]] = none;
    map[i] = none;
  }
}

}  // namespace amalgo
