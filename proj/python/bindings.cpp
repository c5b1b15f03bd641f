#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "amalgo/calculus.hpp"
#include "amalgo/ends.hpp"
#include "amalgo/error.hpp"
#include "amalgo/io.hpp"
#include "amalgo/qiverify.hpp"

namespace py = pybind11;
using namespace amalgo;

namespace {

// Python values cross the boundary as JSON text.
Json to_json_value(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) return Json(obj.cast<std::string>());
  auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return Json::parse(text);
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// A generator string, a path to a document, or a graph description.
Json graph_json(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) {
    auto s = obj.cast<std::string>();
    if (!std::filesystem::exists(s)) {
      if (parse_generator(s)) return Json(s);
      throw Error(ErrorCode::Parse, "no such file or generator: " + s);
    }
    auto doc = load_document(s);
    if (!doc.contains("graph")) throw Error(ErrorCode::Parse, s + ": document has no \"graph\" entry");
    return doc.at("graph");
  }
  auto j = to_json_value(obj);
  if (j.is_object() && j.contains("schema") && j.contains("graph")) return j.at("graph");
  return j;
}

// pybind11 holders cannot be pointers to const; graphs are never mutated.
using Held = std::shared_ptr<Graph>;

GraphHandle as_graph(const py::handle& obj) {
  if (py::isinstance<Graph>(obj)) return obj.cast<Held>();
  return graph_from_json(graph_json(obj));
}

Held held(const py::handle& obj) { return std::const_pointer_cast<Graph>(as_graph(obj)); }

SpecHandle as_spec(const py::handle& obj) {
  auto j = graph_json(obj);
  if (!j.is_object() || !j.contains("amalgam")) throw Error(ErrorCode::Parse, "graph is not an amalgam");
  return spec_from_json(j.at("amalgam"));
}

FTree as_tree(const py::handle& obj) {
  if (py::isinstance<py::str>(obj)) {
    auto doc = load_document(obj.cast<std::string>());
    if (!doc.contains("tree")) throw Error(ErrorCode::Parse, "document has no \"tree\" entry");
    return ftree_from_json(doc.at("tree"));
  }
  auto j = to_json_value(obj);
  if (j.is_object() && j.contains("schema") && j.contains("tree")) return ftree_from_json(j.at("tree"));
  return ftree_from_json(j);
}

py::dict verify_map(const py::handle& input, const std::string& map, std::vector<std::size_t> radii,
                    std::size_t probe, unsigned jobs, std::size_t vertex_budget, std::size_t pair_budget) {
  std::optional<QiMap> f;
  if (map == "psi") f = psi_map(as_spec(input));
  else if (map == "collapse") f = tree_collapse_map(as_spec(input));
  else if (map == "absorb") f = absorb_finite_factor(as_spec(input));
  else if (map == "normalize") f = adhesion_normalize(as_spec(input), probe).forward;
  else if (map == "cubic") f = cubic_tree_map(as_graph(input), probe, probe);
  else if (map == "treefact") f = tree_factorisation_map(as_graph(input), probe).map;
  else if (map == "identity") f = identity_map(as_graph(input));
  else throw Error(ErrorCode::Parse, "unknown map '" + map + "'");
  py::gil_scoped_release release;
  auto result = check_claim(*f, radii, VerifyOptions{vertex_budget, pair_budget, jobs});
  py::gil_scoped_acquire acquire;
  Json body = {{"map", f->tag()},
               {"source", f->source()->kind()},
               {"target", f->target()->kind()},
               {"claimed", to_json(f->claimed())},
               {"result", to_json(result)}};
  return to_python(body);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lazy graphs, tree amalgamations and quasi-isometry checks.";

  static py::handle error_type = py::exception<Error>(m, "AmalgoError").release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      auto exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = to_string(e.code());
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<Graph, Held>(m, "Graph")
      .def_property_readonly("kind", &Graph::kind)
      .def_property_readonly("origin", [](const Graph& g) { return g.origin().token; })
      .def_property_readonly("is_finite", &Graph::is_finite)
      .def("contains", [](const Graph& g, const std::string& v) { return g.contains(VertexId(v)); })
      .def("neighbors",
           [](const Graph& g, const std::string& v) {
             std::vector<std::string> out;
             for (const auto& w : g.neighbors(VertexId(v))) out.push_back(w.token);
             return out;
           })
      .def("to_json", [](const Graph& g) { return to_python(graph_to_json(g)); })
      .def("__repr__", [](const Graph& g) { return "<amalgo.Graph " + g.kind() + ">"; });

  m.def("graph", &held, py::arg("description"),
        "Graph from a generator string, a document path or a description dict.");
  m.def("build", &held, py::arg("description"),
        "Same as graph(); amalgam descriptions give the contracted graph.");
  m.def(
      "ball",
      [](const py::handle& g, std::optional<std::string> center, std::size_t radius) {
        auto h = as_graph(g);
        return to_python(to_json(ball(*h, center ? VertexId(*center) : h->origin(), radius)));
      },
      py::arg("graph"), py::arg("center") = py::none(), py::arg("radius") = 3);
  m.def(
      "distance",
      [](const py::handle& g, const std::string& u, const std::string& v) {
        auto h = as_graph(g);
        VertexId a(u), b(v);
        for (const auto& x : {a, b})
          if (!h->contains(x)) throw Error(ErrorCode::UnknownVertex, "unknown vertex '" + x.token + "'");
        if (auto d = h->distance(a, b)) return *d;
        for (std::size_t r = 1;; r *= 2) {
          auto view = ball(*h, a, r);
          if (auto i = view.find(b)) return view.dist[*i];
          if (h->is_finite() && view.size() == h->finite_vertices()->size())
            throw Error(ErrorCode::Internal, "vertices in different components");
        }
      },
      py::arg("graph"), py::arg("u"), py::arg("v"));
  m.def("verify", &verify_map, py::arg("input"), py::arg("map"), py::arg("radii") = std::vector<std::size_t>{4, 6, 8},
        py::arg("probe") = 6, py::arg("jobs") = 1, py::arg("vertex_budget") = kDefaultVertexBudget,
        py::arg("pair_budget") = kDefaultPairBudget);
  m.def(
      "end_estimate",
      [](const py::handle& g, std::size_t r, std::optional<std::size_t> outer) {
        auto h = as_graph(g);
        return to_python(to_json(end_count_estimate(*h, r, outer.value_or(3 * r))));
      },
      py::arg("graph"), py::arg("r"), py::arg("outer") = py::none());
  m.def(
      "decide", [](const py::handle& a, const py::handle& b) { return to_python(to_json(decide_qi(as_tree(a), as_tree(b)))); },
      py::arg("left"), py::arg("right"));
  m.def(
      "normal_form", [](const py::handle& t) { return to_python(to_json(normal_form(as_tree(t)))); },
      py::arg("tree"));
}
