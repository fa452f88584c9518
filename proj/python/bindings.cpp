#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "whynot/concept.hpp"
#include "whynot/error.hpp"
#include "whynot/evaluate.hpp"
#include "whynot/explain.hpp"
#include "whynot/instance.hpp"
#include "whynot/obda.hpp"
#include "whynot/ontology.hpp"
#include "whynot/query.hpp"
#include "whynot/schema.hpp"

namespace py = pybind11;
using namespace whynot;

namespace {

// Python-side values: float for numbers, str for text.
py::object to_py(const Constant& c) {
  if (c.is_number()) return py::float_(c.as_number());
  return py::str(c.as_text());
}

Constant from_py(const py::handle& h) {
  if (py::isinstance<py::bool_>(h)) throw py::type_error("booleans are not constants");
  if (py::isinstance<py::int_>(h) || py::isinstance<py::float_>(h)) return Constant::number(h.cast<double>());
  if (py::isinstance<py::str>(h)) return Constant::text(h.cast<std::string>());
  throw py::type_error("constants are numbers or strings");
}

py::tuple to_py(const Tuple& t) {
  py::tuple out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = to_py(t[i]);
  return out;
}

Tuple tuple_from_py(const py::iterable& it) {
  Tuple t;
  for (auto h : it) t.push_back(from_py(h));
  return t;
}

ConstantSet set_from_py(const py::iterable& it) {
  ConstantSet s;
  for (auto h : it) s.insert(from_py(h));
  return s;
}

py::frozenset to_py(const ConstantSet& s) {
  py::set out;
  for (const auto& c : s) out.add(to_py(c));
  return py::frozenset(out);
}

py::frozenset to_py(const TupleSet& ts) {
  py::set out;
  for (const auto& t : ts) out.add(to_py(t));
  return py::frozenset(out);
}

// None stands for the whole domain.
py::object to_py(const Extension& e) {
  if (e.all) return py::none();
  return to_py(e.members);
}

using SchemaPtr = std::shared_ptr<Schema>;

SchemaPtr mutable_ptr(const std::shared_ptr<const Schema>& s) { return std::const_pointer_cast<Schema>(s); }

Database database_from_py(const py::dict& tables) {
  Database db;
  for (auto [k, v] : tables) {
    auto& ts = db[k.cast<std::string>()];
    for (auto row : v.cast<py::iterable>()) ts.insert(tuple_from_py(row.cast<py::iterable>()));
  }
  return db;
}

Explanation indices_from_labels(const FiniteOntology& o, const std::vector<std::string>& names) {
  Explanation e;
  for (const auto& n : names) {
    auto i = o.find(n);
    if (!i) throw SchemaError("unknown concept '" + n + "'");
    e.push_back(*i);
  }
  return e;
}

std::vector<std::string> labels_of(const FiniteOntology& o, const Explanation& e) {
  std::vector<std::string> out;
  for (auto i : e) out.push_back(o.label(i));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Why-not explanations for missing query answers";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<SchemaError>(m, "SchemaError", error);
  py::register_exception<UnsupportedConstraintClass>(m, "UnsupportedConstraintClass", error);
  py::register_exception<NoSolution>(m, "NoSolution", error);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", error);
  py::register_exception<TuplePresent>(m, "TuplePresent", error);
  py::register_exception<ConstraintViolation>(m, "ConstraintViolation", error);

  py::enum_<Fragment>(m, "Fragment")
      .value("MINIMAL", Fragment::Minimal)
      .value("SELECTION_FREE", Fragment::SelectionFree)
      .value("INTERSECTION_FREE", Fragment::IntersectionFree)
      .value("FULL", Fragment::Full);

  py::enum_<Generality>(m, "Generality")
      .value("LESS", Generality::Less)
      .value("GREATER", Generality::Greater)
      .value("EQUIVALENT", Generality::Equivalent)
      .value("INCOMPARABLE", Generality::Incomparable);

  py::class_<Schema, SchemaPtr>(m, "Schema")
      .def_static("from_json", [](const std::string& text) { return std::make_shared<Schema>(load_schema(text)); })
      .def_static("from_file", [](const std::string& path) { return std::make_shared<Schema>(load_schema_file(path)); })
      .def("relations", [](const Schema& s) {
        std::vector<std::pair<std::string, std::vector<std::string>>> out;
        for (const auto& r : s.relations()) out.emplace_back(r.name, r.attributes);
        return out;
      });

  py::class_<Instance>(m, "Instance")
      .def_static("from_dir", [](const SchemaPtr& s, const std::string& dir) { return load_instance_dir(s, dir); },
                  py::arg("schema"), py::arg("directory"))
      .def_static(
          "from_tables",
          [](const SchemaPtr& s, const py::dict& tables) { return Instance::with_views(s, database_from_py(tables)); },
          py::arg("schema"), py::arg("tables"), "Base tables as {relation: [row, ...]}; views are materialized.")
      .def_property_readonly("schema", [](const Instance& i) { return mutable_ptr(i.schema_ptr()); })
      .def("tuples", [](const Instance& i, const std::string& r) { return to_py(i.tuples(r)); })
      .def("active_domain", [](const Instance& i) { return to_py(i.active_domain()); });

  m.def(
      "validate",
      [](const SchemaPtr& s, const py::dict& tables) {
        auto rep = validate_constraints(*s, database_from_py(tables));
        py::list out;
        for (const auto& c : rep.checks) {
          py::list w;
          for (const auto& t : c.witnesses) w.append(to_py(t));
          out.append(py::make_tuple(c.constraint, c.passed, w));
        }
        return out;
      },
      py::arg("schema"), py::arg("tables"), "Per-constraint (description, passed, witnesses).");

  m.def(
      "evaluate", [](const std::string& q, const Instance& i) { return to_py(evaluate(parse_query(q), i)); },
      py::arg("query"), py::arg("instance"));

  py::class_<Concept>(m, "Concept")
      .def_static("parse", [](const std::string& text, const SchemaPtr& s) { return parse_concept(text, *s); })
      .def_static("top", &Concept::top)
      .def_static("nominal", [](const py::handle& c) { return Concept::nominal(from_py(c)); })
      .def("extension", [](const Concept& c, const Instance& i) { return to_py(extension(c, i)); })
      .def("length", &Concept::length)
      .def("is_top", &Concept::is_top)
      .def("meet", &Concept::meet)
      .def("minimize", [](const Concept& c, const Instance& i) { return minimize_irredundant(c, i); })
      .def("__str__", &Concept::str)
      .def("__repr__", [](const Concept& c) { return "Concept(" + c.str() + ")"; })
      .def("__eq__", [](const Concept& a, const Concept& b) { return a == b; })
      .def("__hash__", [](const Concept& c) { return py::hash(py::str(c.str())); });

  m.def("subsumed_by_instance",
        [](const Concept& a, const Concept& b, const Instance& i) { return subsumed_by_instance(a, b, i); });
  m.def("subsumed_by_schema",
        [](const Concept& a, const Concept& b, const SchemaPtr& s) { return subsumed_by_schema(a, b, *s); });

  py::class_<FiniteOntology, std::shared_ptr<FiniteOntology>>(m, "Ontology")
      .def_static(
          "from_file",
          [](const std::string& path, const SchemaPtr& s) -> std::shared_ptr<FiniteOntology> {
            return std::make_shared<FileOntology>(load_ontology_file(path, *s));
          },
          py::arg("path"), py::arg("schema"))
      .def_static(
          "from_obda",
          [](const std::string& path, const SchemaPtr& s) -> std::shared_ptr<FiniteOntology> {
            auto spec = std::make_shared<const ObdaSpec>(load_obda_file(path, s));
            return std::make_shared<ObdaOntology>(spec);
          },
          py::arg("path"), py::arg("schema"))
      .def("__len__", &FiniteOntology::size)
      .def("labels", [](const FiniteOntology& o) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < o.size(); ++i) out.push_back(o.label(i));
        return out;
      })
      .def("subsumed",
           [](const FiniteOntology& o, const std::string& a, const std::string& b) {
             auto e = indices_from_labels(o, {a, b});
             return o.subsumed(e[0], e[1]);
           })
      .def("extension", [](const FiniteOntology& o, const std::string& label, const Instance& i) {
        return to_py(ext_of(o, label, i));
      });

  py::class_<WhyNotInstance>(m, "WhyNotInstance")
      .def(py::init([](const Instance& i, const std::string& q, const py::iterable& missing) {
             return WhyNotInstance::create(i, parse_query(q), tuple_from_py(missing));
           }),
           py::arg("instance"), py::arg("query"), py::arg("missing"))
      .def_property_readonly("answers", [](const WhyNotInstance& w) { return to_py(w.answers()); })
      .def_property_readonly("missing", [](const WhyNotInstance& w) { return to_py(w.missing()); });

  m.def(
      "is_explanation",
      [](const WhyNotInstance& w, const std::vector<Concept>& e) { return is_explanation(e, w); }, py::arg("why_not"),
      py::arg("concepts"));
  m.def(
      "is_explanation_in",
      [](const WhyNotInstance& w, const FiniteOntology& o, const std::vector<std::string>& labels) {
        return is_explanation(indices_from_labels(o, labels), w, o);
      },
      py::arg("why_not"), py::arg("ontology"), py::arg("labels"));

  m.def(
      "exhaustive_mge",
      [](const WhyNotInstance& w, const FiniteOntology& o) {
        std::vector<std::vector<std::string>> out;
        for (const auto& e : exhaustive_mge(w, o)) out.push_back(labels_of(o, e));
        return out;
      },
      py::arg("why_not"), py::arg("ontology"));
  m.def(
      "all_explanations",
      [](const WhyNotInstance& w, const FiniteOntology& o) {
        std::vector<std::vector<std::string>> out;
        for (const auto& e : all_explanations(w, o)) out.push_back(labels_of(o, e));
        return out;
      },
      py::arg("why_not"), py::arg("ontology"));
  m.def(
      "check_mge",
      [](const WhyNotInstance& w, const FiniteOntology& o, const std::vector<std::string>& labels) {
        return check_mge(w, o, indices_from_labels(o, labels));
      },
      py::arg("why_not"), py::arg("ontology"), py::arg("labels"));
  m.def(
      "shortest_mge",
      [](const WhyNotInstance& w, const FiniteOntology& o) -> std::optional<std::vector<std::string>> {
        auto e = shortest_mge(w, o);
        if (!e) return std::nullopt;
        return labels_of(o, *e);
      },
      py::arg("why_not"), py::arg("ontology"));
  m.def(
      "card_maximal_explanation",
      [](const WhyNotInstance& w, const FiniteOntology& o) -> std::optional<std::vector<std::string>> {
        auto e = card_maximal_explanation(w, o);
        if (!e) return std::nullopt;
        return labels_of(o, *e);
      },
      py::arg("why_not"), py::arg("ontology"));
  m.def(
      "degree_of_generality",
      [](const WhyNotInstance& w, const FiniteOntology& o, const std::vector<std::string>& labels) {
        std::vector<Extension> exts;
        for (auto i : indices_from_labels(o, labels)) exts.push_back(o.extension(i, w.instance()));
        return degree_of_generality(exts);
      },
      py::arg("why_not"), py::arg("ontology"), py::arg("labels"), "None when some extension is unbounded.");

  m.def("lub", [](const Instance& i, const py::iterable& x, Fragment f) { return lub(i, set_from_py(x), f, i.active_domain()); },
        py::arg("instance"), py::arg("constants"), py::arg("fragment"));
  m.def("incremental_mge", &incremental_mge, py::arg("why_not"), py::arg("fragment"));
  m.def("check_mge_instance", &check_mge_instance, py::arg("why_not"), py::arg("concepts"), py::arg("fragment"));
  m.def(
      "compute_mge_schema", [](const WhyNotInstance& w, Fragment f) { return compute_mge_schema(w, f); },
      py::arg("why_not"), py::arg("fragment"));
  m.def(
      "compare_generality",
      [](const std::vector<Concept>& a, const std::vector<Concept>& b, const Instance& i) {
        return compare_generality(a, b, i);
      },
      py::arg("left"), py::arg("right"), py::arg("instance"));
  m.def(
      "minimize_explanation",
      [](const std::vector<Concept>& e, const Instance& i) { return minimize_explanation(e, i); },
      py::arg("concepts"), py::arg("instance"));
}
