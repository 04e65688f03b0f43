#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "kondratiev/errors.hpp"
#include "kondratiev/io.hpp"
#include "kondratiev/norms.hpp"
#include "kondratiev/verify.hpp"

namespace py = pybind11;
using namespace kondratiev;

namespace {

// Everything crosses the boundary as JSON text; the Python package wraps it in dicts.
DomainSpec domain_of(const std::string& text) {
  if (text.empty()) return DomainSpec::model(3, 0);
  return domain_from_json(json::parse(text));
}

QuadSpec quad_of(const std::string& text) {
  if (text.empty()) return QuadSpec::from_env();
  return quad_from_json(json::parse(text));
}

std::string dump(const json& j) { return j.dump(); }

std::string norm_json(const std::string& func, const std::string& space, const std::string& domain,
                      const std::string& quad, bool extremal) {
  DomainSpec dom = domain_of(domain);
  SpaceParams sp = parse_space(space);
  QuadSpec q = quad_of(quad);
  TestFunction u = parse_function(func, &dom);
  NormResult r;
  {
    py::gil_scoped_release nogil;
    r = extremal ? extremal_norm(u, sp, dom, q) : kondratiev_norm(u, sp, dom, q);
  }
  json j = to_json(r);
  j["function"] = u.str();
  return dump(j);
}

std::string verify_json(const std::string& suite, std::uint64_t seed, const std::string& quad) {
  VerifyConfig cfg;
  cfg.seed = seed;
  cfg.quad = quad_of(quad);
  std::vector<SuiteReport> reps;
  {
    py::gil_scoped_release nogil;
    if (suite == "all")
      reps = run_all(cfg);
    else
      reps.push_back(run_suite(suite, cfg));
  }
  json list = json::array();
  bool all = true;
  for (const auto& r : reps) {
    list.push_back(to_json(r));
    all = all && r.pass;
  }
  return dump(json{{"suites", list}, {"pass", all}, {"seed", seed}});
}

}  // namespace

PYBIND11_MODULE(_kondratiev, m) {
  m.doc() = "Kondratiev space calculus and numerical verification (JSON in, JSON out)";

  static py::exception<Error> exc(m, "KondratievError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::handle(exc.ptr())(std::string(e.what()));
      inst.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(exc.ptr(), inst.ptr());
    } catch (const json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("embed", [](const std::string& src, const std::string& tgt, const std::string& domain) {
    return dump(to_json(embed_continuous(parse_space(src), parse_space(tgt), domain_of(domain))));
  }, py::arg("src"), py::arg("tgt"), py::arg("domain") = "");
  m.def("compact", [](const std::string& src, const std::string& tgt, const std::string& domain) {
    return dump(to_json(embed_compact(parse_space(src), parse_space(tgt), domain_of(domain))));
  }, py::arg("src"), py::arg("tgt"), py::arg("domain") = "");
  m.def("algebra", [](const std::string& space, const std::string& domain) {
    return dump(to_json(is_algebra(parse_space(space), domain_of(domain))));
  }, py::arg("space"), py::arg("domain") = "");
  m.def("product", [](const std::string& u, const std::string& v, const std::string& domain) {
    return dump(to_json(product_target(parse_space(u), parse_space(v), domain_of(domain))));
  }, py::arg("u"), py::arg("v"), py::arg("domain") = "");
  m.def("power", [](const std::string& space, int n, const std::string& domain) {
    return dump(to_json(power_target(parse_space(space), n, domain_of(domain))));
  }, py::arg("space"), py::arg("n"), py::arg("domain") = "");
  m.def("member_const", [](const std::string& space, const std::string& domain) {
    return dump(to_json(member_constant(parse_space(space), domain_of(domain))));
  }, py::arg("space"), py::arg("domain") = "");
  m.def("member_rho", [](const std::string& b, const std::string& space, const std::string& domain) {
    return dump(to_json(member_rho_power(parse_rational(b), parse_space(space), domain_of(domain))));
  }, py::arg("b"), py::arg("space"), py::arg("domain") = "");
  m.def("norm", &norm_json, py::arg("func"), py::arg("space"), py::arg("domain") = "", py::arg("quad") = "",
        py::arg("extremal") = false);
  m.def("verify", &verify_json, py::arg("suite"), py::arg("seed") = VerifyConfig{}.seed, py::arg("quad") = "");
  m.def("suite_ids", [] { return suite_ids(); });
  m.def("quad_profile", [](const std::string& name) { return dump(to_json(QuadSpec::profile(name))); });
  m.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release nogil;
      code = run_cli(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "run the command-line interface in-process; returns (exit code, stdout, stderr)");
}
