#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sigmadep/cli.hpp"
#include "sigmadep/dependence.hpp"
#include "sigmadep/errors.hpp"
#include "sigmadep/isomonodromy.hpp"
#include "sigmadep/parser.hpp"
#include "sigmadep/sequence.hpp"

namespace py = pybind11;
using namespace sigmadep;

namespace sigmadep::python {

// Elements carry their tower so that printing and endomorphisms need no
// extra argument on the Python side.
struct Element {
  FieldElement value;
  TowerSpec tower;
};

}  // namespace sigmadep::python

using sigmadep::python::Element;

namespace {

Element element(const std::string& text, const TowerSpec& tower) { return {parse_expression(text, tower), tower}; }

py::object fraction(const BigRational& q) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  return Fraction(to_string(q));
}

BigRational rational(const py::handle& h) {
  BigRational q(py::str(h).cast<std::string>());
  q.canonicalize();
  return q;
}

Point point(const py::dict& values, const TowerSpec& tower) {
  Point p;
  for (const auto& [k, v] : values) {
    const std::string name = k.cast<std::string>();
    const auto idx = tower.index_of(name);
    if (!idx) throw EngineError(ErrorCode::unknown_variable, "unknown variable " + name);
    p[*idx] = rational(v);
  }
  return p;
}

Matrix matrix(const std::string& text, const TowerSpec& tower) { return Matrix(parse_matrix(text, tower)); }

std::string matrix_text(const Matrix& m, const TowerSpec& tower) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + to_string(m.at(r, c), tower);
    out += "]";
  }
  return out + "]";
}

py::list qmatrix(const QMatrix& m) {
  py::list rows;
  for (const auto& row : m) {
    py::list r;
    for (const BigRational& x : row) r.append(fraction(x));
    rows.append(r);
  }
  return rows;
}

CompanionConvention convention(const std::string& s) {
  if (s == "standard") return CompanionConvention::standard;
  if (s == "transposed") return CompanionConvention::transposed;
  throw EngineError(ErrorCode::invalid_argument, "convention must be standard or transposed");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact sigma-dependence tests for phi(y) = a y and isomonodromy checks";

  static py::exception<EngineError> engine_error(m, "EngineError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const EngineError& e) {
      // args = (code, message)
      py::tuple args = py::make_tuple(std::string(error_code_name(e.code())), e.what());
      PyErr_SetObject(engine_error.ptr(), args.ptr());
    }
  });

  py::class_<TowerSpec>(m, "Tower")
      .def(py::init([](const std::vector<std::string>& decls) { return parse_tower(decls); }), py::arg("declarations"))
      .def_property_readonly("names",
                             [](const TowerSpec& t) {
                               std::vector<std::string> out;
                               for (const VarDecl& d : t.vars()) out.push_back(d.name);
                               return out;
                             })
      .def("declarations",
           [](const TowerSpec& t) {
             std::vector<std::string> out;
             for (int v = 0; v <= t.top(); ++v) out.push_back(format_var_decl(t, v));
             return out;
           })
      .def("parse", [](const TowerSpec& t, const std::string& text) { return element(text, t); }, py::arg("text"))
      .def("__repr__", [](const TowerSpec& t) {
        std::string s = "Tower([";
        for (int v = 0; v <= t.top(); ++v) s += (v ? ", '" : "'") + format_var_decl(t, v) + "'";
        return s + "])";
      });

  py::class_<Element>(m, "Element")
      .def(py::init([](const std::string& text, const TowerSpec& tower) { return element(text, tower); }),
           py::arg("text"), py::arg("tower"))
      .def("__str__", [](const Element& e) { return to_string(e.value, e.tower); })
      .def("__repr__", [](const Element& e) { return "Element('" + to_string(e.value, e.tower) + "')"; })
      .def("__eq__", [](const Element& a, const Element& b) { return a.value == b.value; })
      .def("__add__", [](const Element& a, const Element& b) { return Element{a.value + b.value, a.tower}; })
      .def("__sub__", [](const Element& a, const Element& b) { return Element{a.value - b.value, a.tower}; })
      .def("__mul__", [](const Element& a, const Element& b) { return Element{a.value * b.value, a.tower}; })
      .def("__truediv__", [](const Element& a, const Element& b) { return Element{a.value / b.value, a.tower}; })
      .def("__neg__", [](const Element& a) { return Element{-a.value, a.tower}; })
      .def("__pow__", [](const Element& a, long e) { return Element{a.value.pow(e), a.tower}; })
      .def("phi", [](const Element& a, unsigned k) { return Element{apply_endo(a.value, a.tower, Endo::phi, k), a.tower}; },
           py::arg("power") = 1)
      .def("sigma",
           [](const Element& a, unsigned k) { return Element{apply_endo(a.value, a.tower, Endo::sigma, k), a.tower}; },
           py::arg("power") = 1)
      .def("evaluate", [](const Element& a, const py::dict& at) { return fraction(evaluate(a.value, point(at, a.tower))); },
           py::arg("point"));

  m.def(
      "decide",
      [](const Element& a) {
        const Verdict v = decide(a.value, a.tower);
        py::dict out;
        out["dependent"] = v.dependent();
        out["lambda"] = to_string(v.decomposition.lambda, a.tower);
        py::list aik;
        for (std::size_t i = 0; i < v.aik.classes; ++i) {
          py::list row;
          for (long k = 0; k < v.aik.t; ++k) row.append(v.aik.at(i, k));
          aik.append(row);
        }
        out["aik"] = aik;
        if (v.dependent()) {
          const Certificate& c = v.certificate();
          out["word"] = c.word.exponents;
          out["u"] = c.u;
          out["b"] = Element{c.b, a.tower};
        } else {
          py::list w;
          for (const IndependenceWitness& x : v.witnesses()) w.append(py::make_tuple(x.class_index + 1, x.k, x.value));
          out["witnesses"] = w;
        }
        return out;
      },
      py::arg("a"), "Verdict as a dict; witnesses are (i, k, a_ik) with classes numbered from 1.");

  m.def(
      "verify_certificate",
      [](const Element& a, const std::vector<long>& word, const Element& b) {
        return verify_certificate(a.value, {{word}, b.value, {}, 1}, a.tower);
      },
      py::arg("a"), py::arg("word"), py::arg("b"));

  m.def(
      "check_certificate_numeric",
      [](const Element& a, const std::vector<long>& word, const Element& b, std::size_t trials, std::uint64_t seed) {
        const SamplePlan plan = make_sample_plan(a.tower, trials, seed);
        return check_certificate_numeric(a.value, {{word}, b.value, {}, 1}, a.tower, plan).agree;
      },
      py::arg("a"), py::arg("word"), py::arg("b"), py::arg("trials") = 20, py::arg("seed") = 0);

  m.def(
      "companion",
      [](const std::vector<std::string>& coeffs, const TowerSpec& tower, const std::string& conv) {
        std::vector<FieldElement> cs;
        for (const std::string& c : coeffs) cs.push_back(parse_expression(c, tower));
        return matrix_text(companion(cs, tower, convention(conv)).A, tower);
      },
      py::arg("coeffs"), py::arg("tower"), py::arg("convention") = "standard");

  m.def(
      "verify_isomonodromic",
      [](const std::string& A, const std::string& B, const TowerSpec& tower) {
        return verify_isomonodromic(make_system(matrix(A, tower), tower), {matrix(B, tower)});
      },
      py::arg("A"), py::arg("B"), py::arg("tower"));

  m.def(
      "is_isomonodromic",
      [](const std::string& A, const TowerSpec& tower, long degree_cap, std::uint64_t seed) -> py::object {
        py::gil_scoped_release release;
        const IsomonodromyResult r = is_isomonodromic(make_system(matrix(A, tower), tower), degree_cap, seed);
        py::gil_scoped_acquire acquire;
        if (!r.witness) return py::none();
        return py::str(matrix_text(r.witness->B, tower));
      },
      py::arg("A"), py::arg("tower"), py::arg("degree_cap") = 20, py::arg("seed") = 0,
      "A witness B in re-parseable matrix syntax, or None.");

  m.def(
      "fundamental_matrix",
      [](const std::string& A, const TowerSpec& tower, long i0, long horizon, const py::dict& params,
         bool auto_advance) {
        const SequenceFrame f =
            fundamental_matrix(make_system(matrix(A, tower), tower), i0, horizon, point(params, tower), auto_advance);
        py::dict out;
        out["i0"] = f.i0;
        py::list values;
        for (const QMatrix& y : f.values) values.append(qmatrix(y));
        out["values"] = values;
        out["skipped"] = f.skipped;
        return out;
      },
      py::arg("A"), py::arg("tower"), py::arg("i0"), py::arg("horizon"), py::arg("params") = py::dict(),
      py::arg("auto_advance") = false);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& input) {
        std::istringstream in(input);
        const cli::Outcome out = cli::run(args, in);
        return py::make_tuple(out.exit_code, out.output);
      },
      py::arg("args"), py::arg("stdin") = "", "Same as the command-line tool; returns (exit_code, output).");

  m.attr("SCHEMA_VERSION") = cli::kSchemaVersion;
}
