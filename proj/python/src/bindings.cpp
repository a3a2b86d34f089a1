#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "qvdp/bifurcation.hpp"
#include "qvdp/compactify.hpp"
#include "qvdp/detect.hpp"
#include "qvdp/equilibria.hpp"
#include "qvdp/error.hpp"
#include "qvdp/integrate.hpp"
#include "qvdp/model.hpp"

namespace py = pybind11;
using namespace qvdp;

namespace {

std::string str(std::string_view s) { return std::string(s); }

py::dict region_dict(const RegionLabel& r) {
  py::dict d;
  d["label"] = str(to_string(r.label));
  d["regime"] = r.regime == '-' ? py::object(py::none()) : py::object(py::str(std::string(1, r.regime)));
  d["certificates"] = r.certificates;
  d["homoclinic_proximal"] = r.homoclinic_proximal;
  return d;
}

py::dict report_dict(const AttractorReport& r) {
  py::dict d;
  d["verdict"] = str(to_string(r.verdict));
  d["rotation_number"] = r.rotation_number ? py::object(py::float_(*r.rotation_number)) : py::object(py::none());
  const auto& e = r.evidence;
  py::dict ev;
  ev["samples"] = e.samples;
  ev["transient"] = e.transient;
  ev["tail_step"] = e.tail_step;
  ev["revisit_period"] = e.revisit_period;
  ev["revisit_distance"] = e.revisit_distance;
  ev["closure_residual"] = e.closure_residual;
  ev["max_angle_gap"] = e.max_angle_gap;
  ev["rotation_error"] = e.rotation_error;
  ev["monotone_winding"] = e.monotone_winding;
  d["evidence"] = ev;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quintic van der Pol-Duffing oscillator: equilibria, bifurcations, cycles";

  static py::exception<Error> exc(m, "QvdpError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InvalidParams || e.code() == ErrorCode::Domain) {
        PyErr_SetString(PyExc_ValueError, e.what());
      } else {
        py::set_error(exc, e.what());
      }
    }
  });

  py::class_<Params>(m, "Params")
      .def(py::init<double, double, double, double, double>(), py::arg("mu"), py::arg("beta"), py::arg("eps"),
           py::arg("alpha") = 0.0, py::arg("omega") = 1.0)
      .def_property_readonly("mu", &Params::mu)
      .def_property_readonly("beta", &Params::beta)
      .def_property_readonly("eps", &Params::eps)
      .def_property_readonly("alpha", &Params::alpha)
      .def_property_readonly("omega", &Params::omega)
      .def_property_readonly("forced", &Params::forced)
      .def("__repr__", [](const Params& p) {
        return "Params(mu=" + std::to_string(p.mu()) + ", beta=" + std::to_string(p.beta()) +
               ", eps=" + std::to_string(p.eps()) + ", alpha=" + std::to_string(p.alpha()) +
               ", omega=" + std::to_string(p.omega()) + ")";
      });

  py::class_<State>(m, "State")
      .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
      .def_readwrite("x", &State::x)
      .def_readwrite("y", &State::y)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self == py::self)
      .def("__iter__", [](const State& s) { return py::iter(py::make_tuple(s.x, s.y)); })
      .def("__repr__", [](const State& s) { return "State(" + std::to_string(s.x) + ", " + std::to_string(s.y) + ")"; });

  m.def("field", [](State s, const Params& p, double t) { return field_forced(s, t, p); }, py::arg("s"),
        py::arg("p"), py::arg("t") = 0.0);
  m.def("hamiltonian", &hamiltonian);
  m.def("jacobian", &jacobian);

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_property_readonly("label", [](const Equilibrium& e) { return str(to_string(e.label)); })
      .def_property_readonly("kind", [](const Equilibrium& e) { return str(to_string(e.kind)); })
      .def_readonly("location", &Equilibrium::location)
      .def_property_readonly("eigenvalues", [](const Equilibrium& e) { return py::make_tuple(e.eigs[0], e.eigs[1]); });
  m.def("find_equilibria", &find_equilibria);
  m.def("critical_mus", [](const Params& p) {
    const auto c = critical_mus(p);
    return py::make_tuple(c.mu1, c.muc, c.mu2);
  });

  m.def("hopf_curve", &hopf_curve);
  m.def("homoclinic_curve", &homoclinic_curve);
  m.def("homoclinic_orbit", &homoclinic_orbit);
  m.def("hopf_normal_form", [](const Params& p) {
    const HopfData h = hopf_normal_form(p);
    py::dict d;
    d["lambda"] = h.lambda;
    d["c1"] = h.c1;
    d["c1_critical"] = h.c1_critical;
    d["l1"] = h.l1;
    d["ddelta_dmu"] = h.ddelta_dmu;
    py::dict g;
    for (const auto& [kl, v] : h.g) g[py::make_tuple(kl.first, kl.second)] = v;
    d["g"] = g;
    return d;
  });
  m.def("melnikov_compare", [](double mu, double beta, double eps, double eps1) {
    const auto c = melnikov_compare(mu, beta, eps, eps1);
    py::dict d;
    d["closed_form"] = c.closed_form;
    d["quadrature"] = c.quadrature;
    d["mu3"] = c.mu3;
    d["relative_diff"] = c.relative_diff;
    return d;
  }, py::arg("mu"), py::arg("beta"), py::arg("eps"), py::arg("eps1") = 1.0);
  m.def("classify_region", [](const Params& p) { return region_dict(classify_region(p)); });
  m.def("nonexistence_certificates", [](const Params& p) {
    py::list out;
    for (const auto& c : nonexistence_certificates(p)) out.append(str(to_string(c.kind)));
    return out;
  });

  m.def("infinity_equilibria", [](const Params& p) {
    py::list out;
    for (const auto& e : infinity_equilibria(p)) {
      out.append(py::make_tuple(str(to_string(e.label)), str(to_string(e.kind))));
    }
    return out;
  });
  m.def("disk_project", &disk_project);

  py::class_<LimitCycle>(m, "LimitCycle")
      .def_readonly("representative", &LimitCycle::representative)
      .def_readonly("period", &LimitCycle::period)
      .def_readonly("amplitude", &LimitCycle::amplitude)
      .def_readonly("floquet", &LimitCycle::floquet)
      .def_readonly("stable", &LimitCycle::stable)
      .def_readonly("orbit", &LimitCycle::orbit)
      .def_property_readonly("encloses", [](const LimitCycle& c) {
        py::list out;
        for (auto l : c.encloses) out.append(str(to_string(l)));
        return out;
      });
  m.def("find_limit_cycle", [](const Params& p, State seed) { return find_limit_cycle(p, seed); });

  m.def("trajectory", [](const Params& p, State s0, double t0, double t1, double tol) {
    const PlanarField f = [p](double t, State s) { return field_forced(s, t, p); };
    const Trajectory tr = integrate(f, s0, {t0, t1}, {tol, tol});
    py::list out;
    for (const auto& smp : tr.samples) out.append(py::make_tuple(smp.t, smp.s.x, smp.s.y));
    return py::make_tuple(str(to_string(tr.status)), out);
  }, py::arg("p"), py::arg("s0"), py::arg("t0"), py::arg("t1"), py::arg("tol") = 1e-10);
  m.def("stroboscopic", [](const Params& p, State s0, std::size_t n) { return stroboscopic(p, s0, n).samples; });
  m.def("classify_forced", [](const Params& p, State s0, std::size_t n) {
    return report_dict(classify_forced(p, s0, n));
  }, py::arg("p"), py::arg("s0"), py::arg("n") = 2000);
}
