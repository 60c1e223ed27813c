#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "efg/checker.hpp"
#include "efg/efg.hpp"
#include "efg/generator.hpp"
#include "efg/io.hpp"
#include "efg/stats.hpp"
#include "efg/traces.hpp"

namespace py = pybind11;
using namespace efg;

namespace {

// Report pieces are built as JSON in the core; hand them over as plain
// Python containers.
py::object to_python(const nlohmann::ordered_json &j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

const EventSpec &find_spec(const GraphDocument &doc, const std::string &id) {
  for (const auto &s : doc.specs)
    if (s.object_id == id)
      return s;
  throw Error(ErrorCode::SpecMismatch,
              "graph '" + doc.name + "' has no events for object '" + id + "'");
}

ColoredDirectedGraph colored_for(const GraphDocument &doc,
                                 const std::optional<std::string> &object) {
  return object ? color_for(doc.graph, find_spec(doc, *object)) : doc.graph;
}

py::list edge_list(const ColoredDirectedGraph &g) {
  py::list out;
  for (const Edge &e : g.edges())
    out.append(py::make_tuple(g.name(e.from), g.name(e.to),
                              e.label ? py::cast(*e.label) : py::none()));
  return out;
}

void raise(const char *type_name, const std::string &message,
           std::string_view code) {
  py::object type = py::module_::import("efg._core").attr(type_name);
  py::object exc = type(message);
  exc.attr("code") = std::string(code);
  PyErr_SetObject(type.ptr(), exc.ptr());
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Event-flow graph construction and two-event checking";

  py::object error = py::exception<Error>(m, "Error", PyExc_RuntimeError);
  py::exception<IngestError>(m, "IngestError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p)
        std::rethrow_exception(p);
    } catch (const IngestError &e) {
      raise("IngestError", e.what(), e.diagnostic().code);
    } catch (const Error &e) {
      raise("Error", e.what(), to_string(e.code()));
    }
  });

  py::class_<ColoredDirectedGraph>(m, "Graph")
      .def_property_readonly("node_count", &ColoredDirectedGraph::node_count)
      .def_property_readonly("edge_count", &ColoredDirectedGraph::edge_count)
      .def_property_readonly("nodes",
                             [](const ColoredDirectedGraph &g) {
                               std::vector<std::string> out;
                               for (NodeId n : g.nodes())
                                 out.push_back(g.name(n));
                               return out;
                             })
      .def_property_readonly("colored",
                             [](const ColoredDirectedGraph &g) {
                               std::vector<std::string> out;
                               for (NodeId n : g.colored())
                                 out.push_back(g.name(n));
                               return out;
                             })
      .def_property_readonly("edges", &edge_list,
                             "(from, to, label) triples sorted by endpoints")
      .def("kind",
           [](const ColoredDirectedGraph &g, const std::string &name) {
             return std::string(to_string(g.kind(g.at(name))));
           })
      .def("__eq__", [](const ColoredDirectedGraph &a,
                        const ColoredDirectedGraph &b) { return a == b; })
      .def("__repr__", [](const ColoredDirectedGraph &g) {
        return "<efg.Graph nodes=" + std::to_string(g.node_count()) +
               " edges=" + std::to_string(g.edge_count()) + ">";
      });

  py::class_<GraphDocument>(m, "Document")
      .def_readonly("name", &GraphDocument::name)
      .def_readonly("graph", &GraphDocument::graph)
      .def_property_readonly("objects",
                             [](const GraphDocument &d) {
                               std::vector<std::string> out;
                               for (const auto &s : d.specs)
                                 out.push_back(s.object_id);
                               return out;
                             })
      .def("to_dot", &emit_dot)
      .def("to_json", [](const GraphDocument &d) {
        return graph_to_json(d).dump(2);
      });

  m.def("parse", &parse_document, py::arg("text"),
        py::arg("source") = "<input>",
        "Reads a DOT or JSON graph document.");
  m.def(
      "load",
      [](const std::string &path) {
        return parse_document(read_file(path), path);
      },
      py::arg("path"));

  m.def(
      "build",
      [](const GraphDocument &doc, std::optional<std::string> object) {
        GraphDocument out;
        out.name = doc.name;
        out.graph = build_efg(colored_for(doc, object)).efg;
        if (object)
          out.specs = {find_spec(doc, *object)};
        else
          out.specs = doc.specs;
        return out;
      },
      py::arg("doc"), py::arg("object") = py::none(),
      "Event-flow graph of the document, colored by one object if given.");

  m.def(
      "classes",
      [](const GraphDocument &doc, unsigned k, std::optional<std::string> object,
         std::size_t max_paths) {
        auto built = build_efg(colored_for(doc, object));
        return efg_traces(built.efg, k, OracleLimits{max_paths});
      },
      py::arg("doc"), py::arg("k") = 1, py::arg("object") = py::none(),
      py::arg("max_paths") = kDefaultMaxPaths);

  m.def(
      "stats",
      [](const GraphDocument &doc) {
        return to_python(
            stats_json(compute_stats(doc.graph, build_efg(doc.graph).efg,
                                     doc.name)));
      },
      py::arg("doc"));

  m.def(
      "check",
      [](const GraphDocument &doc, std::optional<std::string> object,
         unsigned k, std::size_t max_paths) {
        py::list out;
        std::vector<const EventSpec *> specs;
        if (object)
          specs.push_back(&find_spec(doc, *object));
        else
          for (const auto &s : doc.specs)
            specs.push_back(&s);
        for (const EventSpec *spec : specs) {
          auto efg = build_efg(color_for(doc.graph, *spec)).efg;
          auto v = check_two_event(efg, *spec, k, OracleLimits{max_paths});
          out.append(to_python(verdict_json(efg, v)));
        }
        return out;
      },
      py::arg("doc"), py::arg("object") = py::none(), py::arg("k") = 1,
      py::arg("max_paths") = kDefaultMaxPaths,
      "One verdict per object: {object, status, witnesses}.");

  m.def(
      "verify",
      [](const GraphDocument &doc, unsigned k, std::size_t max_paths) {
        return to_python(bijection_json(
            verify_bijection(doc.graph, k, OracleLimits{max_paths}), k));
      },
      py::arg("doc"), py::arg("k") = 1, py::arg("max_paths") = kDefaultMaxPaths,
      "Compares CFG equivalence classes with EFG traces.");

  m.def(
      "generate",
      [](std::uint64_t seed, std::pair<std::size_t, std::size_t> nodes,
         std::pair<std::size_t, std::size_t> events, double branch_probability,
         double loop_probability, std::size_t back_edges,
         const std::string &object) {
        GenConfig c;
        c.seed = seed;
        c.nodes = {nodes.first, nodes.second};
        c.events = {events.first, events.second};
        c.branch_probability = branch_probability;
        c.loop_probability = loop_probability;
        c.max_back_edges = back_edges;
        c.object_id = object;
        return generate_document(c);
      },
      py::arg("seed") = 0, py::arg("nodes") = std::pair{1, 10},
      py::arg("events") = std::pair{0, 3}, py::arg("branch_probability") = 0.35,
      py::arg("loop_probability") = 0.5, py::arg("back_edges") = 2,
      py::arg("object") = "obj");

  m.attr("REPORT_SCHEMA_VERSION") = kReportSchemaVersion;
  m.attr("__version__") = EFG_VERSION;
}
