#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maass/class_group.hpp"
#include "maass/conductor.hpp"
#include "maass/census.hpp"
#include "maass/fields.hpp"
#include "maass/galois_module.hpp"
#include "maass/quadratic_forms.hpp"
#include "maass/store.hpp"

namespace py = pybind11;
using namespace maass;

namespace {

CensusOptions options(bool grh, uint64_t seed, double budget, bool construct_fields) {
  CensusOptions o;
  o.grh = grh;
  o.seed = seed;
  o.budget_seconds = budget;
  o.construct_fields = construct_fields;
  return o;
}

CensusKind kind_of(const std::string& k) {
  if (k == "tetra") return CensusKind::Tetrahedral;
  if (k == "octa") return CensusKind::Octahedral;
  throw py::value_error("kind must be 'tetra' or 'octa'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tetrahedral and octahedral parameters of prime level";
  m.attr("engine_version") = kEngineVersion;

  // Records cross the boundary as JSON text; the package parses them.
  m.def(
      "census_record_json",
      [](const std::string& kind, long ell, bool grh, uint64_t seed, double budget, bool construct_fields) {
        py::gil_scoped_release nogil;
        return record_to_json(census_record(kind_of(kind), ell, options(grh, seed, budget, construct_fields))).dump();
      },
      py::arg("kind"), py::arg("ell"), py::arg("grh") = false, py::arg("seed") = 0, py::arg("budget") = 0.0,
      py::arg("construct_fields") = true);

  m.def("census_primes", [](const std::string& kind, long lo, long hi) { return census_primes(kind_of(kind), lo, hi); },
        py::arg("kind"), py::arg("lo"), py::arg("hi"));

  m.def(
      "cyclotomic_cubic_class_group",
      [](long ell, bool grh, uint64_t seed) {
        ClassGroupOptions o;
        o.grh = grh;
        o.seed = seed;
        ClassGroupResult cg;
        {
          py::gil_scoped_release nogil;
          cg = compute_class_group(cubic_subfield_of_cyclotomic(ell), o);
        }
        return py::make_tuple(cg.group.structure(), cg.h().get_str(), cg.conditional);
      },
      py::arg("ell"), py::arg("grh") = false, py::arg("seed") = 0);

  m.def("cubic_polynomial", [](long ell) { return cubic_subfield_of_cyclotomic(ell).poly().to_string(); });

  m.def("shanks_a", [](long ell) -> py::object {
    if (auto w = shanks_check(ell)) return py::int_(w->a);
    return py::none();
  });

  m.def("form_class_group", [](long ell) { return form_class_group(ell).structure(); });

  m.def(
      "decompose",
      [](const std::vector<std::vector<int>>& columns) {
        const int n = static_cast<int>(columns.size());
        std::vector<F2Vec> sigma(n, F2Vec(n));
        for (int j = 0; j < n; ++j) {
          if (static_cast<int>(columns[j].size()) != n) throw py::value_error("sigma must be square");
          for (int i = 0; i < n; ++i) sigma[j].set(i, columns[j][i] & 1);
        }
        return decompose(n, sigma);
      },
      py::arg("sigma_columns"), "(k, m) for sigma of order dividing 3 on F_2^n, given by its columns");

  m.def(
      "conductor_exponent",
      [](const std::string& type, uint64_t p, int e, int f, int g, int inertia_odd) {
        ProjectiveType t = type == "S4" ? ProjectiveType::S4 : ProjectiveType::A4;
        return projective_conductor_exponent(ramification_profile_from_splitting(t, p, e, f, g, inertia_odd));
      },
      py::arg("type"), py::arg("p"), py::arg("e"), py::arg("f"), py::arg("g"), py::arg("inertia_odd") = -1);

  m.def("csv_columns", [](const std::string& kind) { return csv_columns(kind_of(kind)); });

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);
  py::register_exception<IncompleteError>(m, "IncompleteError", PyExc_TimeoutError);
}
