#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sscx/boundary.hpp"
#include "sscx/dynamics.hpp"
#include "sscx/error.hpp"
#include "sscx/geometry.hpp"
#include "sscx/group_io.hpp"
#include "sscx/verify.hpp"

namespace py = pybind11;
using namespace sscx;

namespace {

Word to_word(const std::string& s, int d) { return parse_word(s, d); }

std::unique_ptr<Group> make_group(const std::string& builtin, const std::string& json, const std::string& path) {
  const int given = !builtin.empty() + !json.empty() + !path.empty();
  if (given != 1) throw Error(ErrorKind::InvalidInput, "give exactly one of builtin, json or path");
  if (!builtin.empty()) return std::make_unique<Group>(builtin_group(builtin).recursion);
  if (!json.empty()) return std::make_unique<Group>(parse_group_json(json));
  return std::make_unique<Group>(load_group_file(path));
}

}  // namespace

PYBIND11_MODULE(_sscx, m) {
  m.doc() = "Selfsimilarity complexes of contracting selfsimilar groups";
  m.attr("__version__") = SSCX_VERSION;

  static py::exception<Error> error(m, "SscxError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object kind = py::str(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), py::make_tuple(py::str(e.what()), kind).ptr());
    }
  });

  m.def("builtin_names", &builtin_names);

  py::class_<Group>(m, "Group")
      .def(py::init(&make_group), py::kw_only(), py::arg("builtin") = "", py::arg("json") = "", py::arg("path") = "")
      .def_property_readonly("alphabet", &Group::alphabet)
      .def("definition_hash", &Group::definition_hash)
      .def("nucleus",
           [](Group& g) {
             std::vector<std::string> out;
             for (auto id : g.nucleus().elements) out.push_back(g.describe(id));
             return out;
           })
      .def("magic_level", &Group::magic_level, py::arg("L"))
      .def("act",
           [](Group& g, const std::string& element, const std::string& word) {
             auto sw = g.definition().parse_symbols(element);
             return format_word(g.act(g.id_of(sw), to_word(word, g.alphabet())));
           })
      .def("equal",
           [](Group& g, const std::string& a, const std::string& b) {
             return g.equal(g.definition().parse_symbols(a), g.definition().parse_symbols(b));
           })
      .def("good_generators", [](Group& g) {
        std::vector<std::string> out;
        for (const auto& s : g.good_generators()) out.push_back(s.name);
        return out;
      });

  py::class_<GeodesicInfo>(m, "GeodesicInfo")
      .def_readonly("distance", &GeodesicInfo::distance)
      .def_readonly("min_level", &GeodesicInfo::min_level)
      .def_readonly("max_level", &GeodesicInfo::max_level)
      .def_readonly("horizontal_min", &GeodesicInfo::horizontal_min)
      .def_readonly("horizontal_max", &GeodesicInfo::horizontal_max);

  py::class_<HSigmaEstimate>(m, "HSigmaEstimate")
      .def_readonly("value", &HSigmaEstimate::value)
      .def_readonly("min_rule_value", &HSigmaEstimate::min_rule_value)
      .def_readonly("stabilized", &HSigmaEstimate::stabilized);

  py::class_<Complex>(m, "Complex")
      .def(py::init([](Group& g) { return std::make_unique<Complex>(g); }), py::keep_alive<1, 2>())
      .def_property_readonly("generator_count", &Complex::generator_count)
      .def("graph_distance",
           [](Complex& c, const std::string& u, const std::string& v) {
             return c.graph_distance(to_word(u, c.alphabet()), to_word(v, c.alphabet()));
           })
      .def("horizontal_distance",
           [](Complex& c, const std::string& u, const std::string& v) {
             return c.horizontal_distance(to_word(u, c.alphabet()), to_word(v, c.alphabet()));
           })
      .def("geodesic",
           [](Complex& c, const std::string& u, const std::string& v) {
             return c.geodesic(to_word(u, c.alphabet()), to_word(v, c.alphabet()));
           })
      .def("level_product",
           [](Complex& c, const std::string& u, const std::string& v) {
             return c.level_product(to_word(u, c.alphabet()), to_word(v, c.alphabet()));
           })
      .def("gromov_product",
           [](Complex& c, const std::string& u, const std::string& v) {
             return c.gromov_product(to_word(u, c.alphabet()), to_word(v, c.alphabet()));
           })
      .def("level_connected", [](Complex& c, int n) { return c.level_graph(n)->connected(); })
      .def("estimate_hsigma", &Complex::estimate_HSigma, py::arg("max_level"), py::arg("seed") = 1,
           py::arg("samples_per_level") = 2000)
      .def("level_dot", &Complex::level_dot);

  py::class_<Calibration>(m, "Calibration")
      .def_readonly("hsigma", &Calibration::hsigma)
      .def_readonly("hsigma_min_rule", &Calibration::hsigma_min_rule)
      .def_readonly("magic", &Calibration::magic)
      .def_readonly("delta", &Calibration::delta)
      .def_readonly("epsilon", &Calibration::epsilon);

  m.def("calibrate", &calibrate, py::arg("complex"), py::arg("hsigma") = py::none(), py::arg("epsilon") = py::none(),
        py::arg("seed") = 1);

  m.def(
      "cone_type_counts",
      [](Complex& c, int first, int last, int hsigma) {
        std::vector<std::size_t> out;
        for (const auto& l : enumerate_cone_types(c, first, last, hsigma).levels) out.push_back(l.cumulative);
        return out;
      },
      py::arg("complex"), py::arg("first_level"), py::arg("last_level"), py::arg("hsigma"));

  py::class_<BoundedDegreeStats>(m, "BoundedDegreeStats")
      .def_readonly("C_observed", &BoundedDegreeStats::C_observed)
      .def_readonly("D_observed", &BoundedDegreeStats::D_observed)
      .def_readonly("stable_level", &BoundedDegreeStats::stable_level)
      .def_readonly("constant_in_k", &BoundedDegreeStats::constant_in_k);
  m.def("bounded_degree_stats", &bounded_degree_stats, py::arg("complex"), py::arg("r"), py::arg("first_level"),
        py::arg("last_level"), py::arg("first_k"), py::arg("last_k"), py::arg("max_centers") = 256, py::arg("seed") = 1);

  py::class_<DynatlasReport>(m, "DynatlasReport")
      .def_readonly("D", &DynatlasReport::D)
      .def_readonly("new_per_k", &DynatlasReport::new_per_k)
      .def_readonly("p", &DynatlasReport::p)
      .def_readonly("stabilized", &DynatlasReport::stabilized)
      .def_property_readonly("form_count", [](const DynatlasReport& r) { return r.forms.size(); });
  m.def("build_dynatlas", &build_dynatlas, py::arg("complex"), py::arg("r"), py::arg("hsigma"), py::arg("first_level"),
        py::arg("last_level"), py::arg("first_k"), py::arg("last_k"), py::arg("D") = 0, py::arg("max_centers") = 64,
        py::arg("seed") = 1);

  py::class_<OrbitResult>(m, "OrbitResult")
      .def_readonly("orbit_size", &OrbitResult::orbit_size)
      .def_readonly("q", &OrbitResult::q)
      .def_readonly("bound", &OrbitResult::bound)
      .def_readonly("hypothesis", &OrbitResult::hypothesis)
      .def_readonly("passed", &OrbitResult::pass);
  m.def("stabilizer_orbit", [](Group& g, const std::string& v, int L, const std::string& w) {
    return stabilizer_orbit(g, to_word(v, g.alphabet()), L, to_word(w, g.alphabet()));
  });

  py::class_<Ray>(m, "Ray")
      .def(py::init([](const std::string& text, int alphabet) { return Ray::parse(text, alphabet); }), py::arg("text"),
           py::arg("alphabet") = 2)
      .def("vertex", [](const Ray& r, std::size_t t) { return format_word(r.vertex(t)); })
      .def("__str__", &Ray::str);

  m.def("rays_equivalent", [](Complex& c, const Ray& a, const Ray& b) {
    return rays_equivalent(c, a, b).kind == Verdict::Equivalent;
  });

  m.def(
      "boundary_degrees",
      [](Complex& c, const Ray& ray, int first_n, int last_n) {
        std::vector<std::pair<std::vector<int>, int>> out;
        for (const auto& cls : boundary_preimage_classes(c, ray, first_n, last_n).classes)
          out.emplace_back(std::vector<int>(cls.letters.begin(), cls.letters.end()), cls.degree.value);
        return out;
      },
      py::arg("complex"), py::arg("ray"), py::arg("first_n") = 2, py::arg("last_n") = 12);

  m.def(
      "visual_distance",
      [](Complex& c, const Ray& a, const Ray& b, const Calibration& cal) { return visual_distance(c, a, b, visual_params(cal)); },
      py::arg("complex"), py::arg("a"), py::arg("b"), py::arg("calibration"));

  m.def(
      "run_verify",
      [](Complex& c, const Calibration& cal, std::uint64_t seed) {
        VerifyOptions opt;
        opt.seed = seed;
        std::vector<std::tuple<std::string, std::string, bool, std::string>> out;
        for (const auto& r : run_verify(c, cal, opt).checks) out.emplace_back(r.module, r.name, r.pass, r.detail);
        return out;
      },
      py::arg("complex"), py::arg("calibration"), py::arg("seed") = 7);
}
