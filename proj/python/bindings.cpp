#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kothe/duality.hpp"
#include "kothe/io.hpp"
#include "kothe/rearrange.hpp"

namespace py = pybind11;
using namespace kothe;

namespace {

Rv rv(const std::vector<double>& v) { return Rv(v); }
std::vector<double> vec(const Rv& u) { return {u.begin(), u.end()}; }

py::dict polar_dict(const PolarResult& r) {
  py::dict d;
  d["value"] = r.value;
  d["maximizer"] = vec(r.maximizer);
  d["method"] = to_string(r.method);
  d["upper_bound"] = r.upper_bound;
  d["gap"] = r.gap;
  d["converged"] = r.converged;
  return d;
}

py::list report_list(const CheckReport& report) {
  py::list out;
  for (const auto& c : report.checks) {
    py::dict d;
    d["name"] = c.name;
    d["passed"] = c.passed;
    d["worst_slack"] = c.worst_slack;
    d["statistic"] = c.statistic;
    d["witness"] = c.witness;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_kothe, m) {
  m.doc() = "Seminorms, polars and risk-measure norms on finite probability spaces.";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<io::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<FiniteProbSpace>(m, "Space")
      .def(py::init([](const std::vector<double>& probs) { return FiniteProbSpace(probs); }), py::arg("probs"))
      .def_static("uniform", &FiniteProbSpace::uniform, py::arg("n"))
      .def_property_readonly("size", &FiniteProbSpace::size)
      .def_property_readonly("probs", [](const FiniteProbSpace& s) {
        return std::vector<double>(s.probs().begin(), s.probs().end());
      })
      .def("__len__", &FiniteProbSpace::size)
      .def("__repr__", [](const FiniteProbSpace& s) { return "Space(n=" + std::to_string(s.size()) + ")"; });

  py::class_<YoungFunction>(m, "Young")
      .def_static("power", &YoungFunction::power, py::arg("p"), py::arg("coef") = 1.0)
      .def_static("power_over_p", &YoungFunction::power_over_p, py::arg("p"))
      .def_static("exponential", &YoungFunction::exponential)
      .def_static("entropy", &YoungFunction::entropy)
      .def_static("indicator_ball", &YoungFunction::indicator_ball, py::arg("a"))
      .def_static("tabulated", &YoungFunction::tabulated, py::arg("x"), py::arg("phi"))
      .def("__call__", [](const YoungFunction& f, double x) { return evaluate(f, x); })
      .def("conjugate", [](const YoungFunction& f) { return conjugate(f); })
      .def_property_readonly("name", &YoungFunction::name)
      .def("__repr__", &YoungFunction::name);

  py::class_<RiskMeasureSpec>(m, "RiskMeasure")
      .def_static("avar", &RiskMeasureSpec::avar, py::arg("level"))
      .def_static("entropic", &RiskMeasureSpec::entropic, py::arg("theta"))
      .def_property_readonly("name", &RiskMeasureSpec::name)
      .def("__repr__", &RiskMeasureSpec::name);

  py::class_<SeminormSpec>(m, "Seminorm")
      .def_static("lp", &SeminormSpec::lp, py::arg("p"))
      .def_static("luxemburg", [](const YoungFunction& phi, std::size_t n) {
        return SeminormSpec::luxemburg(MusielakFamily::uniform(n, phi));
      }, py::arg("phi"), py::arg("atoms"))
      .def_static("musielak", [](const std::vector<YoungFunction>& per_atom) {
        return SeminormSpec::luxemburg(MusielakFamily(per_atom));
      }, py::arg("per_atom"))
      .def_static("marcinkiewicz", [](double a) { return SeminormSpec::marcinkiewicz(PhiConcave::power_root(a)); },
                  py::arg("a") = 0.5, "phi(t) = t^a")
      .def_static("lorentz", [](double a) { return SeminormSpec::lorentz(PhiConcave::power_root(a)); },
                  py::arg("a") = 0.5, "phi(t) = t^a")
      .def_static("risk", &SeminormSpec::risk, py::arg("rho"))
      .def_static("gen_orlicz", &SeminormSpec::gen_orlicz, py::arg("phi"), py::arg("r"))
      .def_static("from_config", [](const std::string& path, std::size_t atoms) {
        return io::NormConfig::parse_file(path).seminorm(atoms);
      }, py::arg("path"), py::arg("atoms"))
      .def_property_readonly("name", &SeminormSpec::name)
      .def_property_readonly("rearrangement_invariant", &SeminormSpec::rearrangement_invariant)
      .def("__repr__", &SeminormSpec::name);

  m.def("expectation", [](const FiniteProbSpace& s, const std::vector<double>& u) { return expectation(s, rv(u)); });
  m.def("quantile", [](const FiniteProbSpace& s, const std::vector<double>& u) {
    const StepFunction q = quantile(s, rv(u));
    return py::make_tuple(q.breakpoints(), q.values());
  }, "Decreasing rearrangement as (breakpoints, plateau values).");
  m.def("quantile_integral", [](const FiniteProbSpace& s, const std::vector<double>& u, double t) {
    return quantile_integral(quantile(s, rv(u)), t);
  });
  m.def("cvar_infimum", [](const FiniteProbSpace& s, const std::vector<double>& u, double t) {
    return cvar_infimum(s, rv(u), t);
  });

  m.def("norm", [](const FiniteProbSpace& s, const SeminormSpec& spec, const std::vector<double>& u) {
    return seminorm_value(s, spec, rv(u));
  }, py::arg("space"), py::arg("spec"), py::arg("u"));
  m.def("subgradient", [](const FiniteProbSpace& s, const SeminormSpec& spec, const std::vector<double>& u) {
    return vec(seminorm_subgradient(s, spec, rv(u)));
  });
  m.def("amemiya_dual_norm", [](const FiniteProbSpace& s, const YoungFunction& phi, const std::vector<double>& y) {
    return amemiya_dual_norm(s, rv(y), MusielakFamily::uniform(s.size(), phi));
  }, py::arg("space"), py::arg("phi"), py::arg("y"));
  m.def("check_axioms", [](const FiniteProbSpace& s, const SeminormSpec& spec, int trials, std::uint64_t seed) {
    return report_list(check_axioms(s, spec, trials, seed));
  }, py::arg("space"), py::arg("spec"), py::arg("trials") = 50, py::arg("seed") = 1);

  m.def("polar", [](const FiniteProbSpace& s, const SeminormSpec& spec, const std::vector<double>& y) {
    return polar_dict(polar(s, spec, rv(y)));
  }, py::arg("space"), py::arg("spec"), py::arg("y"));
  m.def("polar_closed_form", [](const FiniteProbSpace& s, const SeminormSpec& spec, const std::vector<double>& y) {
    return polar_closed_form(s, spec, rv(y));
  });
  m.def("verify_bipolar", [](const FiniteProbSpace& s, const SeminormSpec& spec, const std::vector<double>& u) {
    const BipolarReport b = verify_bipolar(s, spec, rv(u));
    py::dict d;
    d["norm"] = b.norm;
    d["bipolar"] = b.bipolar;
    d["rel_gap"] = b.rel_gap;
    return d;
  });

  m.def("evaluate_risk", [](const FiniteProbSpace& s, const RiskMeasureSpec& rho, const std::vector<double>& u) {
    return evaluate_risk(s, rho, rv(u));
  });
  m.def("risk_norm", [](const FiniteProbSpace& s, const RiskMeasureSpec& rho, const std::vector<double>& u) {
    return risk_norm(s, rho, rv(u));
  });
  m.def("penalty", [](const FiniteProbSpace& s, const RiskMeasureSpec& rho, const std::vector<double>& y) {
    const PenaltyResult p = penalty(s, rho, rv(y));
    py::dict d;
    d["value"] = p.value;
    d["bounded"] = p.bounded;
    d["ray"] = vec(p.ray);
    return d;
  });
  m.def("risk_dual_norm", [](const FiniteProbSpace& s, const RiskMeasureSpec& rho, const std::vector<double>& y) {
    const RiskDualNorm r = risk_dual_norm(s, rho, rv(y));
    py::dict d;
    d["inf_form"] = r.inf_form;
    d["polar"] = r.polar;
    d["penalty_norm"] = r.penalty_norm;
    return d;
  });
}
