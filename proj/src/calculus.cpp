#include "amalgo/calculus.hpp"

#include <map>
#include <sstream>

#include "amalgo/error.hpp"

namespace amalgo {

const char* to_string(EndCount e) {
  switch (e) {
    case EndCount::Finite: return "0";
    case EndCount::One: return "1";
    case EndCount::Two: return "2";
    case EndCount::Infinite: return "inf";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::NotEquivalent: return "not_equivalent";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

FTree leaf(std::string name, EndCount ends, std::optional<bool> accessible) {
  if (name.empty()) throw Error(ErrorCode::InvalidSpec, "leaf label must be nonempty");
  return std::make_shared<const FactorisationTree>(
      FactorisationTree{QiTypeLabel{std::move(name), ends, accessible}});
}

FTree node(FTree left, FTree right, bool nontrivial, bool finite_adhesion, bool star,
           std::optional<EndCount> ends, std::optional<bool> accessible) {
  if (!left || !right) throw Error(ErrorCode::InvalidSpec, "factorisation node needs two subtrees");
  return std::make_shared<const FactorisationTree>(FactorisationTree{FactorisationTree::Node{
      std::move(left), std::move(right), nontrivial, finite_adhesion, star, ends, accessible}});
}

namespace {

template <class F>
void each_leaf(const FTree& ft, F&& f) {
  // Iterative so deep random trees do not exhaust the stack.
  std::vector<const FactorisationTree*> stack{ft.get()};
  while (!stack.empty()) {
    const auto* t = stack.back();
    stack.pop_back();
    if (t->is_leaf()) {
      f(t->label());
    } else {
      stack.push_back(t->node().right.get());
      stack.push_back(t->node().left.get());
    }
  }
}

bool label_accessible(const QiTypeLabel& l, std::optional<bool>* out) {
  if (l.accessible) {
    *out = l.accessible;
  } else if (l.ends != EndCount::Infinite) {
    *out = true;
  } else {
    *out = std::nullopt;
  }
  return out->has_value();
}

bool all_nodes_free(const FTree& ft) {
  if (ft->is_leaf()) return true;
  const auto& n = ft->node();
  return n.nontrivial && n.finite_adhesion && !n.star && all_nodes_free(n.left) && all_nodes_free(n.right);
}

// Finite leaves lose their names, and non-root nodes of the form (x * x) over
// one infinite leaf with free flags and nothing supplied collapse to x;
// duplicating a factor does not change the quasi-isometry type of an amalgam
// that already contains it.
FTree collapse_duplicates(const FTree& ft, bool is_root) {
  if (ft->is_leaf()) {
    return ft->label().ends == EndCount::Finite ? leaf("finite", EndCount::Finite) : ft;
  }
  const auto& n = ft->node();
  FTree l = collapse_duplicates(n.left, false);
  FTree r = collapse_duplicates(n.right, false);
  if (!is_root && l->is_leaf() && r->is_leaf() && l->label() == r->label() &&
      l->label().ends != EndCount::Finite && n.nontrivial && n.finite_adhesion && !n.star &&
      !n.ends && !n.accessible) {
    return l;
  }
  if (l == n.left && r == n.right) return ft;
  return node(l, r, n.nontrivial, n.finite_adhesion, n.star, n.ends, n.accessible);
}

}  // namespace

std::vector<QiTypeLabel> leaves(const FTree& ft) {
  std::vector<QiTypeLabel> out;
  each_leaf(ft, [&](const QiTypeLabel& l) { out.push_back(l); });
  return out;
}

bool structurally_equal(const FTree& a, const FTree& b) {
  if (a == b) return true;
  if (a->is_leaf() != b->is_leaf()) return false;
  if (a->is_leaf()) return a->label() == b->label();
  const auto& x = a->node();
  const auto& y = b->node();
  return x.nontrivial == y.nontrivial && x.finite_adhesion == y.finite_adhesion && x.star == y.star &&
         x.ends == y.ends && x.accessible == y.accessible && structurally_equal(x.left, y.left) &&
         structurally_equal(x.right, y.right);
}

std::string render(const FTree& ft) {
  if (ft->is_leaf()) {
    const auto& l = ft->label();
    std::string s = l.name + ":" + to_string(l.ends);
    if (l.accessible) s += *l.accessible ? "+acc" : "-acc";
    return s;
  }
  const auto& n = ft->node();
  std::string s = "(" + render(n.left) + " * " + render(n.right) + ")[";
  std::vector<std::string> flags;
  if (n.nontrivial) flags.push_back("nt");
  if (n.finite_adhesion) flags.push_back("fa");
  if (n.star) flags.push_back("star");
  if (n.ends) flags.push_back(std::string("e=") + to_string(*n.ends));
  if (n.accessible) flags.push_back(*n.accessible ? "acc" : "noacc");
  for (std::size_t i = 0; i < flags.size(); ++i) s += (i ? "," : "") + flags[i];
  return s + "]";
}

void check_namespace(const std::vector<FTree>& trees) {
  std::map<std::string, QiTypeLabel> seen;
  for (const auto& t : trees) {
    each_leaf(t, [&](const QiTypeLabel& l) {
      auto [it, fresh] = seen.emplace(l.name, l);
      if (fresh) return;
      std::optional<bool> a, b;
      label_accessible(it->second, &a);
      label_accessible(l, &b);
      if (it->second.ends != l.ends || a != b) {
        throw Error(ErrorCode::NamespaceInconsistency,
                    "label '" + l.name + "' carries conflicting attributes");
      }
    });
  }
}

bool is_terminal(const FTree& ft) {
  bool ok = true;
  each_leaf(ft, [&](const QiTypeLabel& l) {
    ok = ok && (l.ends == EndCount::Finite || l.ends == EndCount::One);
  });
  return ok;
}

std::set<std::string> infinite_type_set(const FTree& ft) {
  std::set<std::string> out;
  each_leaf(ft, [&](const QiTypeLabel& l) {
    if (l.ends != EndCount::Finite) out.insert(l.name);
  });
  return out;
}

std::set<std::string> one_ended_set(const FTree& ft) {
  std::set<std::string> out;
  each_leaf(ft, [&](const QiTypeLabel& l) {
    if (l.ends == EndCount::One) out.insert(l.name);
  });
  return out;
}

std::optional<EndCount> root_ends(const FTree& ft) {
  if (ft->is_leaf()) return ft->label().ends;
  const auto& n = ft->node();
  if (n.ends) return n.ends;
  if (!n.nontrivial || !n.finite_adhesion || n.star) return std::nullopt;
  bool any_infinite = !infinite_type_set(ft).empty();
  if (any_infinite || all_nodes_free(ft)) return EndCount::Infinite;
  return std::nullopt;
}

std::optional<bool> root_accessible(const FTree& ft) {
  std::optional<bool> out;
  if (ft->is_leaf()) {
    label_accessible(ft->label(), &out);
    return out;
  }
  if (ft->node().accessible) return ft->node().accessible;
  if (is_terminal(ft)) return true;
  return std::nullopt;
}

std::string render(const Classification& c) {
  std::ostringstream os;
  if (c.kind == Classification::Kind::TreeClass) {
    os << "tree-class (case 3)";
    return os.str();
  }
  os << "free-like (case " << c.shape_case << ") {";
  for (std::size_t i = 0; i < c.types.size(); ++i) {
    os << (i ? ", " : "") << c.types[i].name << ":" << to_string(c.types[i].ends);
  }
  if (c.finite_marker) os << (c.types.empty() ? "" : ", ") << "finite";
  os << "}";
  return os.str();
}

Classification normal_form(const FTree& ft) {
  check_namespace({ft});
  auto ends = root_ends(ft);
  if (!ends) {
    throw Error(ErrorCode::EndClassUndetermined, "cannot determine the end class of " + render(ft));
  }
  if (*ends != EndCount::Infinite) {
    throw Error(ErrorCode::NotInfinitelyManyEnds,
                std::string("root has ") + to_string(*ends) + " ends, expected infinitely many");
  }
  std::map<std::string, QiTypeLabel> types;
  each_leaf(ft, [&](const QiTypeLabel& l) {
    if (l.ends != EndCount::Finite) types.emplace(l.name, l);
  });
  Classification c;
  if (types.empty()) return c;
  c.kind = Classification::Kind::FreeLike;
  for (auto& [_, l] : types) c.types.push_back(l);
  // The amalgam of the infinite types is itself infinitely-ended when there
  // are at least two of them, or when the single one is.
  bool self_infinite = c.types.size() >= 2 || c.types.front().ends == EndCount::Infinite;
  c.shape_case = self_infinite ? 1 : 2;
  c.finite_marker = !self_infinite;
  return c;
}

FTree rebuild(const Classification& c) {
  auto free_node = [](FTree a, FTree b) { return node(std::move(a), std::move(b), true, true, false); };
  auto finite = [] { return leaf("finite", EndCount::Finite); };
  if (c.kind == Classification::Kind::TreeClass) return free_node(finite(), finite());
  if (c.types.empty()) throw Error(ErrorCode::InvalidSpec, "free-like classification without types");
  auto as_leaf = [](const QiTypeLabel& l) { return leaf(l.name, l.ends, l.accessible); };
  FTree t = as_leaf(c.types.front());
  if (c.types.size() == 1) {
    return free_node(t, c.finite_marker ? finite() : as_leaf(c.types.front()));
  }
  for (std::size_t i = 1; i < c.types.size(); ++i) t = free_node(t, as_leaf(c.types[i]));
  if (c.finite_marker) t = free_node(t, finite());
  return t;
}

Decision decide_qi(const FTree& g, const FTree& h) {
  check_namespace({g, h});
  if (structurally_equal(collapse_duplicates(g, true), collapse_duplicates(h, true))) {
    return {Verdict::Equivalent, "identical"};
  }
  auto eg = root_ends(g);
  auto eh = root_ends(h);
  if (eg == EndCount::Infinite && eh == EndCount::Infinite && infinite_type_set(g) == infinite_type_set(h)) {
    return {Verdict::Equivalent, "same infinite types"};
  }
  if (eg == EndCount::Two && eh == EndCount::Two) return {Verdict::Equivalent, "two-ended"};
  if (eg && eh && is_terminal(g) && is_terminal(h) && root_accessible(g) == true &&
      root_accessible(h) == true) {
    bool same = *eg == *eh && one_ended_set(g) == one_ended_set(h);
    return {same ? Verdict::Equivalent : Verdict::NotEquivalent, "terminal factorisations"};
  }
  return {Verdict::Unknown, "undetermined"};
}

}  // namespace amalgo
