#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "svir/classify.hpp"
#include "svir/cli.hpp"
#include "svir/families.hpp"
#include "svir/verify.hpp"

namespace py = pybind11;
using namespace svir;

namespace {

HalfIndex half(const std::string& text) { return HalfIndex::from_rational(Rational::parse(text)); }

Family make_family(const std::string& tag, const std::string& params, const std::string& sector) {
  return {parse_family(tag), FamilyParams::parse(params), parse_sector(sector)};
}

}  // namespace

PYBIND11_MODULE(_svir, m) {
  m.doc() = "Exact module checks for Schrodinger-Virasoro algebras";
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

  m.def(
      "bracket",
      [](const std::string& x, const std::string& y, const std::string& sector) {
        const Sector s = parse_sector(sector);
        return format_element(bracket(parse_element(x, s), parse_element(y, s), s));
      },
      py::arg("x"), py::arg("y"), py::arg("sector") = "1/2");

  m.def(
      "act",
      [](const std::string& family, const std::string& params, const std::string& gen,
         const std::string& vec, const std::string& sector) {
        const Family f = make_family(family, params, sector);
        const AlgebraElement g = parse_element(gen, f.sector());
        ModuleVector out;
        const ModuleVector v = parse_vector(vec);
        for (const auto& [h, c] : g.terms()) {
          ModuleVector hv = act(f, h, v);
          for (const auto& [k, x] : hv.terms()) out.add(k, x * c);
        }
        return out.to_string();
      },
      py::arg("family"), py::arg("params"), py::arg("gen"), py::arg("vec"),
      py::arg("sector") = "1/2");

  m.def(
      "verify_family",
      [](const std::string& family, const std::string& params, std::int64_t window,
         const std::string& genrange, const std::string& sector) {
        return verify_family(make_family(family, params, sector), window, half(genrange))
            .to_json()
            .dump();
      },
      py::arg("family"), py::arg("params"), py::arg("window") = 12, py::arg("genrange") = "3",
      py::arg("sector") = "1/2");

  m.def(
      "solve_ansatz",
      [](const std::string& a, const std::string& b, const std::string& bp,
         const std::string& sector, std::int64_t window, const std::string& genrange,
         const std::string& f0, const std::string& d0) {
        AnsatzConfig c;
        c.sector = parse_sector(sector);
        c.a = Rational::parse(a);
        c.b = Rational::parse(b);
        c.bp = bp.empty() ? c.b + Rational(1, 2) : Rational::parse(bp);
        c.window = window;
        c.genrange = half(genrange);
        c.f0 = Rational::parse(f0);
        c.d0 = Rational::parse(d0);
        return solve_ansatz(c).to_json().dump();
      },
      py::arg("a"), py::arg("b"), py::arg("bp") = "", py::arg("sector") = "1/2",
      py::arg("window") = 8, py::arg("genrange") = "2", py::arg("f0") = "1", py::arg("d0") = "0");

  m.def(
      "deformation",
      [](const std::string& preset, const std::string& alpha) {
        return deformation_check(deformation_preset(preset, Rational::parse(alpha))).to_json().dump();
      },
      py::arg("preset"), py::arg("alpha") = "1");

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = svir::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));

  m.def("typo_ledger_hash", &typo_ledger_hash);
  m.attr("__version__") = SVIR_VERSION;
}
