// amalgo: batch front end. Artifacts go to --out or stdout; exit 0 on success
// or a passing check, 1 on a failed check, 2 on bad input or exhausted budgets.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "amalgo/calculus.hpp"
#include "amalgo/error.hpp"
#include "amalgo/io.hpp"
#include "amalgo/qimaps.hpp"
#include "amalgo/qiverify.hpp"

using namespace amalgo;

namespace {

struct Config {
  std::vector<std::string> inputs;
  std::vector<std::size_t> radii;
  std::size_t vertex_budget = kDefaultVertexBudget;
  std::size_t pair_budget = kDefaultPairBudget;
  std::string out;
  std::string format = "json";
  unsigned jobs = 1;
  std::string map;
  std::string center;
  std::optional<std::size_t> outer;
  std::size_t probe = 6;
};

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::Parse, "cannot write " + cfg.out);
  f << text;
}

std::vector<std::size_t> radii_or(const Config& cfg, std::vector<std::size_t> fallback) {
  auto r = cfg.radii.empty() ? std::move(fallback) : cfg.radii;
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] <= r[i - 1]) throw Error(ErrorCode::Parse, "radii must be strictly increasing");
  }
  return r;
}

// A document with a "graph" entry, or a generator call such as regtree(3).
Json graph_doc(const std::string& arg) {
  if (!std::filesystem::exists(arg)) {
    if (parse_generator(arg)) return document({{"graph", arg}});
    throw Error(ErrorCode::Parse, "no such file or generator: " + arg);
  }
  auto doc = load_document(arg);
  if (!doc.contains("graph")) throw Error(ErrorCode::Parse, arg + ": document has no \"graph\" entry");
  return doc;
}

GraphHandle load_graph(const std::string& arg) { return graph_from_json(graph_doc(arg).at("graph")); }

SpecHandle load_spec(const std::string& arg) {
  auto doc = graph_doc(arg);
  const Json& g = doc.at("graph");
  if (!g.is_object() || !g.contains("amalgam")) throw Error(ErrorCode::Parse, arg + ": graph is not an amalgam");
  return spec_from_json(g.at("amalgam"));
}

FTree load_tree(const std::string& arg) {
  auto doc = load_document(arg);
  if (!doc.contains("tree")) throw Error(ErrorCode::Parse, arg + ": document has no \"tree\" entry");
  return ftree_from_json(doc.at("tree"));
}

std::string render_ball(const Config& cfg, const BallView& view, Json extra) {
  if (cfg.format == "dot") return to_dot(view);
  if (cfg.format == "edgelist") return to_edgelist(view);
  extra["ball"] = to_json(view);
  return dump(document(std::move(extra)));
}

int run_build(const Config& cfg) {
  auto spec = load_spec(cfg.inputs.at(0));
  auto g = contract(spec);
  auto r = radii_or(cfg, {4}).back();
  auto view = ball(*g, g->origin(), r, cfg.vertex_budget);
  emit(cfg, render_ball(cfg, view, {{"command", "build"}, {"graph", g->kind()}, {"spec", spec_to_json(*spec)}}));
  return 0;
}

int run_ball(const Config& cfg) {
  auto g = load_graph(cfg.inputs.at(0));
  VertexId c = cfg.center.empty() ? g->origin() : VertexId(cfg.center);
  auto r = radii_or(cfg, {3}).back();
  auto view = ball(*g, c, r, cfg.vertex_budget);
  emit(cfg, render_ball(cfg, view, {{"command", "ball"}, {"graph", g->kind()}}));
  return 0;
}

int run_dist(const Config& cfg) {
  if (cfg.inputs.size() != 3) throw Error(ErrorCode::Parse, "dist takes a graph and two vertex tokens");
  auto g = load_graph(cfg.inputs[0]);
  VertexId u(cfg.inputs[1]), v(cfg.inputs[2]);
  if (!g->contains(u)) throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + u.token + "'");
  if (!g->contains(v)) throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + v.token + "'");
  std::optional<std::size_t> d = g->distance(u, v);
  std::string how = "closed form";
  // Balls are exact, so the first ball about u containing v gives d(u, v).
  for (std::size_t r = 1; !d; r *= 2) {
    auto view = ball(*g, u, r, cfg.vertex_budget);
    if (auto i = view.find(v)) d = view.dist[*i];
    how = "breadth-first search";
    if (!d && g->is_finite() && view.size() == g->finite_vertices()->size()) {
      throw Error(ErrorCode::Internal, "vertices in different components");
    }
  }
  emit(cfg, dump(document({{"command", "dist"},
                           {"graph", g->kind()},
                           {"u", u.token},
                           {"v", v.token},
                           {"distance", *d},
                           {"method", how}})));
  return 0;
}

int run_verify(const Config& cfg) {
  const auto& in = cfg.inputs.at(0);
  auto radii = radii_or(cfg, {4, 6, 8});
  std::optional<QiMap> f;
  Json extra = Json::object();
  if (cfg.map == "psi") {
    f = psi_map(load_spec(in));
  } else if (cfg.map == "collapse") {
    f = tree_collapse_map(load_spec(in));
  } else if (cfg.map == "absorb") {
    f = absorb_finite_factor(load_spec(in));
  } else if (cfg.map == "normalize") {
    auto n = adhesion_normalize(load_spec(in), cfg.probe);
    auto clauses = check_clauses(*n.spec);
    extra["clauses"] = {{"single_vertex", clauses.single_vertex},
                        {"distinct", clauses.distinct},
                        {"covering", clauses.covering}};
    extra["normalized_spec"] = spec_to_json(*n.spec);
    f = n.forward;
  } else if (cfg.map == "cubic") {
    f = cubic_tree_map(load_graph(in), cfg.probe, cfg.probe);
  } else if (cfg.map == "treefact") {
    auto t = tree_factorisation_map(load_graph(in), cfg.probe);
    extra["tree"] = t.tree->kind();
    extra["cubic_applied"] = t.cubic_applied;
    if (t.probe) extra["tree_ends"] = to_json(*t.probe);
    f = t.map;
  } else if (cfg.map == "identity") {
    f = identity_map(load_graph(in));
  } else {
    throw Error(ErrorCode::Parse, "unknown map '" + cfg.map + "'");
  }
  VerifyOptions opt{cfg.vertex_budget, cfg.pair_budget, cfg.jobs};
  auto result = check_claim(*f, radii, opt);
  Json radii_json = radii;
  Json body = {{"command", "verify"},
               {"map", f->tag()},
               {"source", f->source()->kind()},
               {"target", f->target()->kind()},
               {"claimed", to_json(f->claimed())},
               {"radii", radii_json},
               {"result", to_json(result)}};
  if (!extra.empty()) body["construction"] = extra;
  emit(cfg, dump(document(std::move(body))));
  return result.pass ? 0 : 1;
}

int run_ends(const Config& cfg) {
  auto g = load_graph(cfg.inputs.at(0));
  Json estimates = Json::array();
  for (auto r : radii_or(cfg, {3, 4, 5})) {
    estimates.push_back(to_json(end_count_estimate(*g, r, cfg.outer.value_or(3 * r), cfg.vertex_budget)));
  }
  emit(cfg, dump(document({{"command", "ends"}, {"graph", g->kind()}, {"estimates", estimates}})));
  return 0;
}

int run_decide(const Config& cfg) {
  if (cfg.inputs.size() != 2) throw Error(ErrorCode::Parse, "calc decide takes two tree documents");
  auto g = load_tree(cfg.inputs[0]);
  auto h = load_tree(cfg.inputs[1]);
  auto d = decide_qi(g, h);
  Json body = to_json(d);
  body["command"] = "calc decide";
  body["left"] = render(g);
  body["right"] = render(h);
  emit(cfg, dump(document(std::move(body))));
  return 0;
}

int run_normal_form(const Config& cfg) {
  auto t = load_tree(cfg.inputs.at(0));
  auto c = normal_form(t);
  emit(cfg, dump(document({{"command", "calc normal-form"}, {"tree", render(t)}, {"classification", to_json(c)}})));
  return 0;
}

void add_common(CLI::App* sub, Config& cfg, bool radii, bool verify) {
  if (radii) sub->add_option("-r,--radii", cfg.radii, "radii, comma separated")->delimiter(',');
  sub->add_option("--budget-vertices", cfg.vertex_budget, "vertex budget per ball")->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.out, "write the artifact here instead of stdout");
  sub->add_option("--format", cfg.format, "json, dot or edgelist")
      ->check(CLI::IsMember({"json", "dot", "edgelist"}));
  if (verify) {
    sub->add_option("--budget-pairs", cfg.pair_budget, "pairs per radius before sampling")
        ->check(CLI::PositiveNumber);
    sub->add_option("--jobs", cfg.jobs, "worker threads, 0 for one per core");
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Tree amalgamations and quasi-isometries"};
  app.require_subcommand(1);

  auto* build = app.add_subcommand("build", "contract an amalgam and export a ball");
  build->add_option("spec", cfg.inputs, "amalgam document")->required();
  add_common(build, cfg, true, false);

  auto* ballc = app.add_subcommand("ball", "export a ball of a graph");
  ballc->add_option("graph", cfg.inputs, "graph document or generator call")->required();
  ballc->add_option("--center", cfg.center, "center vertex token (default: origin)");
  add_common(ballc, cfg, true, false);

  auto* dist = app.add_subcommand("dist", "exact distance between two vertices");
  dist->add_option("args", cfg.inputs, "graph u v")->required()->expected(3);
  add_common(dist, cfg, false, false);

  auto* verify = app.add_subcommand("verify", "construct a map and check its claimed constants");
  verify->add_option("input", cfg.inputs, "graph or amalgam document")->required();
  verify->add_option("--map", cfg.map, "psi, collapse, cubic, absorb, normalize, treefact or identity")
      ->required()
      ->check(CLI::IsMember({"psi", "collapse", "cubic", "absorb", "normalize", "treefact", "identity"}));
  verify->add_option("--probe", cfg.probe, "probe radius used by the constructions");
  add_common(verify, cfg, true, true);

  auto* ends = app.add_subcommand("ends", "truncated end counts");
  ends->add_option("graph", cfg.inputs, "graph document or generator call")->required();
  ends->add_option("--outer", cfg.outer, "outer radius (default 3r)");
  add_common(ends, cfg, true, false);

  auto* calc = app.add_subcommand("calc", "factorisation-tree calculus");
  calc->require_subcommand(1);
  auto* decide = calc->add_subcommand("decide", "decide quasi-isometry of two factorisations");
  decide->add_option("trees", cfg.inputs, "two tree documents")->required()->expected(2);
  add_common(decide, cfg, false, false);
  auto* nf = calc->add_subcommand("normal-form", "classify an infinitely-ended factorisation");
  nf->add_option("tree", cfg.inputs, "tree document")->required();
  add_common(nf, cfg, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << dump(error_json(ErrorCode::Parse, e.what()));
    std::cerr << "amalgo: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*build) return run_build(cfg);
    if (*ballc) return run_ball(cfg);
    if (*dist) return run_dist(cfg);
    if (*verify) return run_verify(cfg);
    if (*ends) return run_ends(cfg);
    if (*decide) return run_decide(cfg);
    if (*nf) return run_normal_form(cfg);
  } catch (const Error& e) {
    auto text = dump(error_json(e.code(), e.what()));
    try {
      emit(cfg, text);
    } catch (const Error&) {
      std::cout << text;
    }
    std::cerr << "amalgo: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cout << dump(error_json(ErrorCode::Internal, e.what()));
    std::cerr << "amalgo: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
