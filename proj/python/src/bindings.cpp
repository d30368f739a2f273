#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "expsum/catalog.hpp"
#include "expsum/chain_io.hpp"
#include "expsum/cli.hpp"
#include "expsum/errors.hpp"
#include "expsum/spectral.hpp"
#include "expsum/sum_engine.hpp"

namespace py = pybind11;
using namespace expsum;

namespace {

SumSpec make_spec(std::size_t n, const std::vector<std::string>& variety, const std::string& f,
                  const std::string& weight, std::int64_t a) {
  SumSpec s(n);
  if (!variety.empty()) s.variety = AffineVariety::parse(n, variety);
  if (!f.empty()) s.f = IntPolynomial::parse(f, VarLayout{n, false});
  if (weight == "kloosterman") {
    s.weight = KloostermanSummand{a};
  } else if (weight == "kl-function") {
    s.weight = KloostermanFunction{a};
  } else if (weight != "none") {
    throw DomainError("unknown weight '" + weight + "'");
  }
  return s;
}

py::dict eval_sum_py(std::uint32_t p, std::size_t n, const std::vector<std::string>& variety, const std::string& f,
                     const std::vector<std::int64_t>& h, std::uint32_t m, const std::string& weight, std::int64_t a) {
  auto s = make_spec(n, variety, f, weight, a);
  s.h = h.empty() ? std::vector<std::int64_t>(n, 0) : h;
  auto ctx = FieldCtx::create(p, m);
  const auto r = eval_sum(s, *ctx);
  py::dict d;
  d["value"] = r.value;
  d["points"] = r.points;
  d["exact"] = r.exact ? py::cast(r.exact->counts()) : py::none();
  return d;
}

py::array_t<std::complex<double>> grid_py(std::uint32_t p, std::size_t n, const std::vector<std::string>& variety,
                                          const std::string& f) {
  const auto s = make_spec(n, variety, f, "none", 1);
  auto ctx = FieldCtx::create(p);
  const auto g = complete_grid(s, *ctx);
  std::vector<py::ssize_t> shape(n, static_cast<py::ssize_t>(p));
  py::array_t<std::complex<double>> out(shape);
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

std::string verify_catalog_py(const std::string& name, const std::string& params, std::uint32_t p) {
  const auto e = build_catalog_entry(name, nlohmann::json::parse(params));
  auto ctx = FieldCtx::create(p);
  validate_chain(e.datum.chain, *ctx);
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : e.grids(*ctx, {})) {
    auto j = report_to_json(verify_kl(e.datum, g.grid));
    j["grid"] = g.label;
    out.push_back(j);
  }
  return out.dump();
}

std::string weights_py(std::uint32_t p, std::size_t N, std::size_t n, const std::vector<std::string>& variety,
                       const std::string& f, const std::string& weight, std::int64_t a) {
  const auto s = make_spec(n, variety, f, weight, a);
  return profile_to_json(fit_recurrence(extension_sums(s, p, N))).dump();
}

py::tuple run_cli_py(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"expsum"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exponential sums over finite fields";

  auto base = py::register_exception<Error>(m, "ExpsumError");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<CapExceeded>(m, "CapExceeded", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ChainError>(m, "ChainError", base.ptr());
  py::register_exception<RankError>(m, "RankError", base.ptr());

  m.def("catalog_names", &catalog_names);
  m.def(
      "gauss_sum",
      [](std::uint32_t p, std::uint64_t order, std::uint64_t index, std::uint32_t ext) {
        return gauss_sum(*FieldCtx::create(p, ext), order, index);
      },
      py::arg("p"), py::arg("order"), py::arg("index") = 1, py::arg("m") = 1);
  m.def("eval_sum", &eval_sum_py, py::arg("p"), py::arg("n"), py::arg("variety") = std::vector<std::string>{},
        py::arg("f") = "", py::arg("h") = std::vector<std::int64_t>{}, py::arg("m") = 1, py::arg("weight") = "none",
        py::arg("a") = 1);
  m.def("complete_grid", &grid_py, py::arg("p"), py::arg("n"), py::arg("variety") = std::vector<std::string>{},
        py::arg("f") = "");
  m.def("verify_catalog_json", &verify_catalog_py, py::arg("name"), py::arg("params") = "{}", py::arg("p"));
  m.def("weights_json", &weights_py, py::arg("p"), py::arg("N"), py::arg("n") = 1,
        py::arg("variety") = std::vector<std::string>{}, py::arg("f") = "", py::arg("weight") = "none",
        py::arg("a") = 1);
  m.def(
      "family_identity",
      [](std::size_t n, std::uint32_t p) {
        const auto r = check_family_identity(n, *FieldCtx::create(p));
        py::dict d;
        d["checked"] = r.checked;
        d["mismatches"] = r.mismatches;
        d["modulus_mismatches"] = r.modulus_mismatches;
        return d;
      },
      py::arg("n"), py::arg("p"));
  m.def("run_cli", &run_cli_py, py::arg("args"));
}
