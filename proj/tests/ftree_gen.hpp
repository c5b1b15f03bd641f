#pragma once

// Random factorisation trees over a fixed, consistent label namespace.

#include <random>
#include <vector>

#include "amalgo/calculus.hpp"

namespace amalgo::testgen {

inline const std::vector<QiTypeLabel>& label_pool() {
  static const std::vector<QiTypeLabel> pool = {
      {"a", EndCount::One, std::nullopt},      {"b", EndCount::One, std::nullopt},
      {"c", EndCount::One, std::nullopt},      {"z", EndCount::Two, std::nullopt},
      {"f", EndCount::Infinite, true},         {"w", EndCount::Infinite, false},
      {"u", EndCount::Infinite, std::nullopt}, {"k", EndCount::Finite, std::nullopt},
      {"m", EndCount::Finite, std::nullopt},
  };
  return pool;
}

inline FTree random_leaf(std::mt19937_64& rng) {
  const auto& pool = label_pool();
  const auto& l = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  return leaf(l.name, l.ends, l.accessible);
}

inline FTree random_finite_leaf(std::mt19937_64& rng) {
  return leaf(std::bernoulli_distribution(0.5)(rng) ? "k" : "m", EndCount::Finite);
}

// Mostly free nodes so that ends are usually derivable; sometimes supplied
// attributes on the root.
inline FTree random_tree(std::mt19937_64& rng, int depth = 0) {
  std::uniform_real_distribution<double> u(0, 1);
  if (depth >= 4 || u(rng) < 0.3 + 0.15 * depth) return random_leaf(rng);
  FTree l = random_tree(rng, depth + 1);
  FTree r = random_tree(rng, depth + 1);
  bool nt = u(rng) < 0.85, fa = u(rng) < 0.9, star = u(rng) < 0.1;
  std::optional<EndCount> ends;
  std::optional<bool> acc;
  if (depth == 0 && u(rng) < 0.15) ends = static_cast<EndCount>(std::uniform_int_distribution<int>(0, 3)(rng));
  if (depth == 0 && u(rng) < 0.1) acc = u(rng) < 0.5;
  return node(l, r, nt, fa, star, ends, acc);
}

// Replaces one randomly chosen leaf by (leaf * extra).
template <class Make>
FTree graft_at_leaf(const FTree& t, std::mt19937_64& rng, Make&& make, bool infinite_only) {
  std::vector<const FactorisationTree*> cands;
  std::vector<const FactorisationTree*> stack{t.get()};
  while (!stack.empty()) {
    auto* x = stack.back();
    stack.pop_back();
    if (x->is_leaf()) {
      if (!infinite_only || x->label().ends != EndCount::Finite) cands.push_back(x);
    } else {
      stack.push_back(x->node().left.get());
      stack.push_back(x->node().right.get());
    }
  }
  if (cands.empty()) return nullptr;
  auto* target = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
  auto rec = [&](auto&& self, const FTree& s) -> FTree {
    if (s.get() == target) return make(s);
    if (s->is_leaf()) return s;
    const auto& n = s->node();
    return node(self(self, n.left), self(self, n.right), n.nontrivial, n.finite_adhesion, n.star, n.ends,
                n.accessible);
  };
  return rec(rec, t);
}

// A finite factor amalgamated non-trivially beside some leaf.
inline FTree insert_finite_leaf(const FTree& t, std::mt19937_64& rng) {
  if (t->is_leaf()) return node(t, random_finite_leaf(rng), true, true, false);
  return graft_at_leaf(t, rng, [&](const FTree& s) { return node(s, random_finite_leaf(rng), true, true, false); },
                       false);
}

// A non-root infinite leaf x becomes (x * x); nullptr when not applicable.
inline FTree duplicate_infinite_leaf(const FTree& t, std::mt19937_64& rng) {
  if (t->is_leaf()) return nullptr;
  return graft_at_leaf(t, rng, [](const FTree& s) { return node(s, s, true, true, false); }, true);
}

}  // namespace amalgo::testgen
