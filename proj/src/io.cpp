#include "amalgo/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "amalgo/error.hpp"

namespace amalgo {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Parse, what); }

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) bad(std::string(where) + ": missing \"" + key + "\"");
  return j.at(key);
}

std::string str(const Json& j, const char* where) {
  if (!j.is_string()) bad(std::string(where) + ": expected a string");
  return j.get<std::string>();
}

std::size_t count(const Json& j, const char* where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(where) + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

bool flag(const Json& j, const char* key) {
  const Json& v = field(j, key, "factorisation node");
  if (!v.is_boolean()) bad(std::string("factorisation node: \"") + key + "\" must be true or false");
  return v.get<bool>();
}

std::vector<VertexId> tokens(const Json& j, const char* where) {
  if (!j.is_array()) bad(std::string(where) + ": expected an array of tokens");
  std::vector<VertexId> out;
  for (const auto& t : j) out.emplace_back(str(t, where));
  return out;
}

EndCount ends_from_json(const Json& j) {
  if (j.is_number_integer()) {
    switch (j.get<long long>()) {
      case 0: return EndCount::Finite;
      case 1: return EndCount::One;
      case 2: return EndCount::Two;
      default: break;
    }
  } else if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "0" || s == "finite") return EndCount::Finite;
    if (s == "1") return EndCount::One;
    if (s == "2") return EndCount::Two;
    if (s == "inf" || s == "infinite") return EndCount::Infinite;
  }
  bad("end class must be 0, 1, 2 or \"inf\"");
}

Json ends_to_json(EndCount e) {
  switch (e) {
    case EndCount::Finite: return 0;
    case EndCount::One: return 1;
    case EndCount::Two: return 2;
    case EndCount::Infinite: return "inf";
  }
  return nullptr;
}

std::optional<bool> optional_bool(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_boolean()) bad(std::string("\"") + key + "\" must be a boolean");
  return j.at(key).get<bool>();
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_document(std::string_view text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("malformed JSON");
  if (!j.is_object()) bad("document must be a JSON object");
  if (!j.contains("schema")) bad("document has no \"schema\" field");
  if (j.at("schema") != kSchema) bad("unsupported schema " + j.at("schema").dump() + ", expected \"" + kSchema + "\"");
  return j;
}

Json load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

Json document(Json body) {
  body["schema"] = kSchema;
  return body;
}

Json error_json(ErrorCode code, const std::string& message) {
  return document({{"error", {{"code", to_string(code)}, {"message", message}}}});
}

GraphHandle parse_generator(std::string_view text) {
  auto open = text.find('(');
  std::string_view name = text.substr(0, open);
  static const std::set<std::string_view> known = {"doubleray", "grid2d", "cycle",   "path",
                                                   "complete",  "regtree", "semitree"};
  if (!known.count(name)) return nullptr;
  std::vector<std::size_t> args;
  if (open != std::string_view::npos) {
    if (text.back() != ')') return nullptr;
    std::string_view inner = text.substr(open + 1, text.size() - open - 2);
    while (true) {
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
      if (ec != std::errc()) bad("bad generator argument in '" + std::string(text) + "'");
      args.push_back(v);
      inner.remove_prefix(p - inner.data());
      if (inner.empty()) break;
      if (inner.front() != ',') bad("bad generator argument in '" + std::string(text) + "'");
      inner.remove_prefix(1);
    }
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n) {
      bad(std::string(name) + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
    }
  };
  if (name == "doubleray") return want(0), doubleray();
  if (name == "grid2d") return want(0), grid2d();
  if (name == "cycle") return want(1), cycle(args[0]);
  if (name == "path") return want(1), path(args[0]);
  if (name == "complete") return want(1), complete(args[0]);
  if (name == "regtree") return want(1), regtree(args[0]);
  if (name == "semitree") return want(2), semitree(args[0], args[1]);
  return nullptr;
}

GraphHandle graph_from_json(const Json& j) {
  GraphHandle g;
  if (j.is_string()) {
    g = parse_generator(j.get<std::string>());
    if (!g) bad("unknown generator '" + j.get<std::string>() + "'");
    return g;
  }
  if (!j.is_object()) bad("graph: expected an object or a generator string");
  if (j.contains("generator")) {
    std::string call = str(j.at("generator"), "generator");
    if (j.contains("params") && !j.at("params").empty()) {
      const Json& ps = j.at("params");
      if (!ps.is_array()) bad("generator params must be an array");
      call += "(";
      for (std::size_t i = 0; i < ps.size(); ++i) call += (i ? "," : "") + std::to_string(count(ps[i], "params"));
      call += ")";
    }
    g = parse_generator(call);
    if (!g) bad("unknown generator '" + call + "'");
  } else if (j.contains("explicit")) {
    const Json& e = j.at("explicit");
    auto vs = tokens(field(e, "vertices", "explicit graph"), "explicit vertices");
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (const auto& pr : field(e, "edges", "explicit graph")) {
      if (!pr.is_array() || pr.size() != 2) bad("explicit edge must be a pair of tokens");
      edges.emplace_back(VertexId(str(pr[0], "edge")), VertexId(str(pr[1], "edge")));
    }
    g = explicit_graph(std::move(vs), edges, e.contains("label") ? str(e.at("label"), "label") : "explicit");
  } else if (j.contains("amalgam")) {
    g = contract(spec_from_json(j.at("amalgam")));
  } else {
    bad("graph: expected \"generator\", \"explicit\" or \"amalgam\"");
  }
  if (j.contains("base")) g = with_base(g, VertexId(str(j.at("base"), "base")));
  if (j.contains("origin")) g = with_origin(g, VertexId(str(j.at("origin"), "origin")));
  return g;
}

Json graph_to_json(const Graph& g) {
  const Graph& inner = g.underlying();
  Json out;
  if (auto* c = dynamic_cast<const ContractedGraph*>(&inner)) {
    out["amalgam"] = spec_to_json(*c->spec());
  } else if (auto gen = parse_generator(inner.kind()); gen && gen->kind() == inner.kind()) {
    auto k = inner.kind();
    auto open = k.find('(');
    out["generator"] = k.substr(0, open);
    Json params = Json::array();
    if (open != std::string::npos) {
      std::istringstream ps(k.substr(open + 1, k.size() - open - 2));
      for (std::string a; std::getline(ps, a, ',');) params.push_back(std::stoull(a));
    }
    out["params"] = params;
  } else if (auto vs = inner.finite_vertices()) {
    Json verts = Json::array(), edges = Json::array();
    for (const auto& v : *vs) {
      verts.push_back(v.token);
      for (const auto& w : inner.neighbors(v))
        if (v.token < w.token) edges.push_back({v.token, w.token});
    }
    out["explicit"] = {{"vertices", verts}, {"edges", edges}, {"label", inner.kind()}};
  } else {
    throw Error(ErrorCode::InvalidSpec, "cannot serialise graph " + inner.kind());
  }
  if (g.base()) out["base"] = g.base()->token;
  if (g.origin() != inner.origin()) out["origin"] = g.origin().token;
  return out;
}

SpecHandle spec_from_json(const Json& j) {
  if (!j.is_object()) bad("amalgam: expected an object");
  const Json& fs = field(j, "factors", "amalgam");
  if (!fs.is_array() || fs.size() != 2) bad("amalgam: \"factors\" must list two graphs");
  AdhesionFamily a;
  std::string mode = j.contains("mode") ? str(j.at("mode"), "mode") : "explicit";
  if (mode == "base_point") {
    a.mode = AdhesionFamily::Mode::SingletonPartition;
  } else if (mode != "explicit") {
    bad("amalgam: unknown mode '" + mode + "'");
  }
  if (a.mode == AdhesionFamily::Mode::Explicit) {
    const Json& ad = field(j, "adhesion", "amalgam");
    if (!ad.is_array() || ad.size() != 2) bad("amalgam: \"adhesion\" must hold one list of sets per factor");
    for (int side = 0; side < 2; ++side) {
      if (!ad[side].is_array()) bad("amalgam: adhesion lists must be arrays");
      for (const auto& s : ad[side]) a.sets[side].push_back(tokens(s, "adhesion set"));
    }
    if (j.contains("p")) {
      const Json& p = j.at("p");
      if (!p.is_array() || p.size() != 2) bad("amalgam: \"p\" must be a pair");
      for (int side = 0; side < 2; ++side) {
        if (count(p[side], "p") != a.sets[side].size()) {
          throw Error(ErrorCode::InvalidSpec, "p" + std::to_string(side + 1) + " = " + p[side].dump() +
                                                  " but factor " + std::to_string(side + 1) + " lists " +
                                                  std::to_string(a.sets[side].size()) + " adhesion sets");
        }
      }
    }
  }
  if (j.contains("bonding")) {
    for (const auto& b : j.at("bonding")) {
      auto k = count(field(b, "k", "bonding"), "bonding k");
      auto l = count(field(b, "l", "bonding"), "bonding l");
      auto& pairs = a.bonding[{k, l}];
      for (const auto& pr : field(b, "pairs", "bonding")) {
        if (!pr.is_array() || pr.size() != 2) bad("bonding pair must be two tokens");
        pairs.emplace_back(VertexId(str(pr[0], "bonding")), VertexId(str(pr[1], "bonding")));
      }
    }
  }
  std::size_t budget = j.contains("identification_budget") ? count(j.at("identification_budget"), "budget")
                                                           : kDefaultIdentificationBudget;
  return std::make_shared<AmalgamSpec>(
      AmalgamSpec::make(graph_from_json(fs[0]), graph_from_json(fs[1]), std::move(a), budget));
}

Json spec_to_json(const AmalgamSpec& spec) {
  Json out;
  out["factors"] = {graph_to_json(*spec.factor(1)), graph_to_json(*spec.factor(2))};
  const auto& a = spec.adhesion();
  if (a.mode == AdhesionFamily::Mode::SingletonPartition) {
    out["mode"] = "base_point";
  } else {
    out["mode"] = "explicit";
    Json ad = Json::array();
    for (int side = 0; side < 2; ++side) {
      Json sets = Json::array();
      for (const auto& s : a.sets[side]) {
        Json ts = Json::array();
        for (const auto& v : s) ts.push_back(v.token);
        sets.push_back(ts);
      }
      ad.push_back(sets);
    }
    out["adhesion"] = ad;
    out["p"] = {a.sets[0].size(), a.sets[1].size()};
  }
  if (!a.bonding.empty()) {
    Json bs = Json::array();
    for (const auto& [kl, pairs] : a.bonding) {
      Json ps = Json::array();
      for (const auto& [x, y] : pairs) ps.push_back({x.token, y.token});
      bs.push_back({{"k", kl.first}, {"l", kl.second}, {"pairs", ps}});
    }
    out["bonding"] = bs;
  }
  if (spec.identification_budget() != kDefaultIdentificationBudget) {
    out["identification_budget"] = spec.identification_budget();
  }
  return out;
}

FTree ftree_from_json(const Json& j) {
  if (j.is_object() && j.contains("leaf")) {
    const Json& l = j.at("leaf");
    return leaf(str(field(l, "name", "leaf"), "leaf name"), ends_from_json(field(l, "ends", "leaf")),
                optional_bool(l, "accessible"));
  }
  if (j.is_object() && j.contains("node")) {
    const Json& n = j.at("node");
    std::optional<EndCount> ends;
    if (n.contains("ends") && !n.at("ends").is_null()) ends = ends_from_json(n.at("ends"));
    return node(ftree_from_json(field(n, "left", "node")), ftree_from_json(field(n, "right", "node")),
                flag(n, "nontrivial"), flag(n, "finite_adhesion"), flag(n, "star"), ends,
                optional_bool(n, "accessible"));
  }
  bad("factorisation tree: expected {\"leaf\": ...} or {\"node\": ...}");
}

Json ftree_to_json(const FTree& ft) {
  if (ft->is_leaf()) {
    const auto& l = ft->label();
    Json o = {{"name", l.name}, {"ends", ends_to_json(l.ends)}};
    if (l.accessible) o["accessible"] = *l.accessible;
    return {{"leaf", o}};
  }
  const auto& n = ft->node();
  Json o = {{"left", ftree_to_json(n.left)},
            {"right", ftree_to_json(n.right)},
            {"nontrivial", n.nontrivial},
            {"finite_adhesion", n.finite_adhesion},
            {"star", n.star}};
  if (n.ends) o["ends"] = ends_to_json(*n.ends);
  if (n.accessible) o["accessible"] = *n.accessible;
  return {{"node", o}};
}

Json to_json(const BallView& view) {
  Json vs = Json::array(), es = Json::array();
  for (std::size_t i = 0; i < view.size(); ++i) {
    vs.push_back({{"token", view.vertices[i].token}, {"distance", view.dist[i]}, {"degree", view.host_degree[i]}});
    for (auto k : view.adj[i])
      if (i < k) es.push_back({view.vertices[i].token, view.vertices[k].token});
  }
  return {{"center", view.center.token},
          {"radius", view.radius},
          {"vertex_count", view.size()},
          {"edge_count", view.edge_count()},
          {"vertices", vs},
          {"edges", es}};
}

Json to_json(const QiConstants& q) {
  return {{"gamma", to_string(q.gamma)}, {"c", to_string(q.c)}, {"density", to_string(q.density_c)}};
}

Json to_json(const Witness& w) {
  Json o = {{"kind", to_string(w.kind)},
            {"u", w.u.token},
            {"source_distance", w.source_distance},
            {"target_distance", w.target_distance},
            {"description", describe(w)}};
  if (w.v) o["v"] = w.v->token;
  return o;
}

Json to_json(const DistortionReport& r) {
  Json o = {{"radius", r.radius},
            {"pairs", r.pairs},
            {"sampled", r.sampled},
            {"claimed", to_json(r.claimed)},
            {"upper_ratio", to_string(r.upper_ratio)},
            {"gamma_hat", to_string(r.gamma_hat)},
            {"c_hat", to_string(r.c_hat)},
            {"density_hat", to_string(r.density_hat)},
            {"density_radius", r.density_radius ? Json(*r.density_radius) : Json(nullptr)},
            {"verdict", r.pass ? "pass" : "fail"}};
  if (r.witness) o["witness"] = to_json(*r.witness);
  return o;
}

Json to_json(const ClaimResult& r) {
  Json reports = Json::array();
  for (const auto& x : r.reports) reports.push_back(to_json(x));
  Json o = {{"verdict", r.pass ? "pass" : "fail"}, {"reports", reports}};
  if (r.failed_radius) o["failed_radius"] = *r.failed_radius;
  if (r.witness) o["witness"] = to_json(*r.witness);
  return o;
}

Json to_json(const EndEstimate& e) {
  return {{"r", e.r},
          {"R", e.R},
          {"census", {e.census[0], e.census[1], e.census[2]}},
          {"class", to_string(e.end_class)}};
}

Json to_json(const Classification& c) {
  Json types = Json::array();
  for (const auto& l : c.types) {
    Json t = {{"name", l.name}, {"ends", ends_to_json(l.ends)}};
    if (l.accessible) t["accessible"] = *l.accessible;
    types.push_back(t);
  }
  return {{"kind", c.kind == Classification::Kind::TreeClass ? "tree_class" : "free_like"},
          {"case", c.shape_case},
          {"types", types},
          {"finite_marker", c.finite_marker},
          {"summary", render(c)}};
}

Json to_json(const Decision& d) { return {{"verdict", to_string(d.verdict)}, {"rule", d.rule}}; }

}  // namespace amalgo
